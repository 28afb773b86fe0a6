#pragma once

#include <cstddef>
#include <vector>

#include "rssi/random.hpp"
#include "rssi/regressor.hpp"

namespace rssi {

namespace io {
class LineReader;
}

/// Stopping parameters. min_samples_split and min_samples_leaf are enforced
/// independently of each other.
struct TreeParams {
  int max_depth = 20;
  int min_samples_split = 2;
  int min_samples_leaf = 2;

  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean training target reaching the node
  std::size_t count = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Binary axis-aligned regression tree; nodes are stored in preorder with
/// the root at index 0. x[feature] <= threshold routes left.
class RegressionTree final : public Regressor {
 public:
  RegressionTree(std::size_t dim, std::vector<TreeNode> nodes);

  std::string_view kind() const noexcept override { return "tree"; }
  std::size_t dim() const noexcept override { return dim_; }
  double predict(std::span<const double> x) const override;
  using Regressor::predict;

  /// Preorder dump: `split <feature> <threshold>` / `leaf <value> <count>`.
  void write(std::ostream& out) const override;
  static RegressionTree read(io::LineReader& in);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const noexcept;
  int depth() const noexcept;

 private:
  std::size_t dim_;
  std::vector<TreeNode> nodes_;
};

/// Standard deviation reduction of splitting `parent` into `left` and
/// `right`, using population standard deviations.
double sdr_split(std::span<const double> parent, std::span<const double> left,
                 std::span<const double> right);

/// Per-split feature subsampling used by random forests.
struct FeatureSampling {
  std::size_t m_features = 0;  // 0 or >= dim: consider every feature
  Rng* rng = nullptr;
};

/// Greedy top-down induction on `rows` of `x` (repeats allowed, as in a
/// bootstrap sample) against `targets`, which is indexed like `x`.
RegressionTree grow_tree(const Dataset& x, std::span<const double> targets,
                         std::span<const std::size_t> rows, const TreeParams& params,
                         const FeatureSampling& sampling = {});

/// Fits on every row of `train`. Deterministic; `seed` is accepted for
/// interface symmetry with the ensembles and does not affect the result.
RegressionTree fit_tree(const Dataset& train, const TreeParams& params, Seed seed = 0);

}  // namespace rssi
