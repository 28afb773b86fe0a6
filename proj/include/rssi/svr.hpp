#pragma once

#include <cstddef>
#include <vector>

#include "rssi/random.hpp"
#include "rssi/regressor.hpp"

namespace rssi {

namespace io {
class LineReader;
}

enum class KernelType { linear, rbf };

struct Kernel {
  KernelType type = KernelType::rbf;
  /// RBF width; 0 means "1 / feature count", resolved at fit time.
  double gamma = 0.0;

  double operator()(std::span<const double> a, std::span<const double> b) const noexcept;
};

struct SvrParams {
  double c = 10.0;
  double epsilon = 0.5;
  Kernel kernel{};
  double tol = 1e-3;
  /// Iteration budget is max_passes * training size pair updates.
  int max_passes = 100;
  std::size_t cache_mb = 256;

  void validate() const;
};

/// f(x) = sum_i beta_i K(sv_i, x) + bias, with beta_i = alpha_i - alpha_i*.
class SvrModel final : public Regressor {
 public:
  SvrModel(std::size_t dim, Kernel kernel, std::vector<double> support_vectors,
           std::vector<double> dual_coefs, double bias, bool converged = true);

  std::string_view kind() const noexcept override { return "svr"; }
  std::size_t dim() const noexcept override { return dim_; }
  double predict(std::span<const double> x) const override;
  using Regressor::predict;
  void write(std::ostream& out) const override;
  static SvrModel read(io::LineReader& in);

  std::size_t support_count() const noexcept { return dual_coefs_.size(); }
  std::span<const double> support_vector(std::size_t i) const noexcept {
    return {support_vectors_.data() + i * dim_, dim_};
  }
  const std::vector<double>& dual_coefs() const noexcept { return dual_coefs_; }
  double bias() const noexcept { return bias_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  bool converged() const noexcept { return converged_; }

  /// Training-row index of each support vector. Populated by fit_svr only;
  /// empty for models read from disk.
  const std::vector<std::size_t>& support_indices() const noexcept { return support_indices_; }
  /// Largest KKT violation (max lower bound minus min upper bound on the
  /// bias) when the solver stopped.
  double final_violation() const noexcept { return final_violation_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  friend SvrModel fit_svr(const Dataset&, const SvrParams&, Seed);

  std::size_t dim_;
  Kernel kernel_;
  std::vector<double> support_vectors_;
  std::vector<double> dual_coefs_;
  double bias_;
  bool converged_;
  std::vector<std::size_t> support_indices_;
  double final_violation_ = 0.0;
  std::size_t iterations_ = 0;
};

/// Epsilon-insensitive SVR. Solves the dual by repeated exact minimization
/// over pairs (beta_i, beta_j) that keeps sum(beta) fixed, until the KKT
/// violation drops below tol or the iteration budget runs out (then
/// converged() is false).
SvrModel fit_svr(const Dataset& train, const SvrParams& params, Seed seed);

}  // namespace rssi
