#include "rssi/cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "model_io.hpp"
#include "rssi/error.hpp"

namespace rssi {

void TreeParams::validate() const {
  if (max_depth <= 0) throw Error(ErrorKind::config, "max_depth must be > 0");
  if (min_samples_split < 2) throw Error(ErrorKind::config, "min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw Error(ErrorKind::config, "min_samples_leaf must be >= 1");
}

RegressionTree::RegressionTree(std::size_t dim, std::vector<TreeNode> nodes)
    : dim_(dim), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(ErrorKind::fit, "tree has no nodes");
  const int count = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    if (static_cast<std::size_t>(node.feature) >= dim_ || node.left <= 0 || node.right <= 0 ||
        node.left >= count || node.right >= count) {
      throw Error(ErrorKind::fit, "malformed tree node");
    }
  }
}

double RegressionTree::predict(std::span<const double> x) const {
  check_dim(x);
  const TreeNode* node = nodes_.data();
  while (!node->is_leaf()) {
    node = &nodes_[static_cast<std::size_t>(
        x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right)];
  }
  return node->value;
}

std::size_t RegressionTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int RegressionTree::depth() const noexcept {
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

void RegressionTree::write(std::ostream& out) const {
  out << "dim " << dim_ << "\nnodes " << nodes_.size() << '\n';
  for (const auto& n : nodes_) {
    if (n.is_leaf()) {
      out << "leaf " << text::format_double(n.value) << ' ' << n.count << '\n';
    } else {
      out << "split " << n.feature << ' ' << text::format_double(n.threshold) << '\n';
    }
  }
}

namespace {

int read_subtree(io::LineReader& in, std::vector<TreeNode>& nodes, std::size_t limit) {
  if (nodes.size() >= limit) in.fail("tree dump has more nodes than declared");
  const auto [key, tok] = in.next();
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (key == "leaf" && tok.size() == 2) {
    nodes.back().value = in.to_double(tok[0]);
    nodes.back().count = static_cast<std::size_t>(in.to_int(tok[1]));
    return id;
  }
  if (key != "split" || tok.size() != 2) in.fail("expected 'leaf <value> <count>' or 'split <feature> <threshold>'");
  const int feature = static_cast<int>(in.to_int(tok[0]));
  const double threshold = in.to_double(tok[1]);
  const int left = read_subtree(in, nodes, limit);
  const int right = read_subtree(in, nodes, limit);
  auto& node = nodes[static_cast<std::size_t>(id)];
  node.feature = feature;
  node.threshold = threshold;
  node.left = left;
  node.right = right;
  return id;
}

}  // namespace

RegressionTree RegressionTree::read(io::LineReader& in) {
  const auto dim = static_cast<std::size_t>(in.integer("dim"));
  const auto count = static_cast<std::size_t>(in.integer("nodes"));
  std::vector<TreeNode> nodes;
  nodes.reserve(count);
  read_subtree(in, nodes, count);
  if (nodes.size() != count) in.fail("tree dump has fewer nodes than declared");
  return RegressionTree(dim, std::move(nodes));
}

double sdr_split(std::span<const double> parent, std::span<const double> left,
                 std::span<const double> right) {
  if (left.empty() || right.empty()) throw Error(ErrorKind::split, "empty side in SDR split");
  if (left.size() + right.size() != parent.size()) {
    throw Error(ErrorKind::split, "split sides do not partition the parent");
  }
  auto sd = [](std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
  };
  const double n = static_cast<double>(parent.size());
  return sd(parent) - (static_cast<double>(left.size()) / n * sd(left) +
                       static_cast<double>(right.size()) / n * sd(right));
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& x, std::span<const double> y, const TreeParams& params,
              const FeatureSampling& sampling)
      : x_(x), y_(y), params_(params), sampling_(sampling) {
    pool_.resize(x.dim());
  }

  std::vector<TreeNode> run(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    buf_.reserve(rows_.size());
    build(0, rows_.size(), 0);
    return std::move(nodes_);
  }

 private:
  struct Candidate {
    double sdr = 0.0;
    int feature = -1;
    double threshold = 0.0;
  };

  static double sd_from_sums(double s1, double s2, double n) {
    const double m = s1 / n;
    return std::sqrt(std::max(0.0, s2 / n - m * m));
  }

  void choose_features() {
    const std::size_t d = x_.dim();
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
    features_.clear();
    const std::size_t m = sampling_.m_features;
    if (m == 0 || m >= d || sampling_.rng == nullptr) {
      features_.assign(pool_.begin(), pool_.end());
      return;
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, d - 1);
      std::swap(pool_[k], pool_[pick(*sampling_.rng)]);
    }
    features_.assign(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(features_.begin(), features_.end());
  }

  int build(std::size_t begin, std::size_t end, int depth) {
    const std::size_t n = end - begin;
    double sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) sum += y_[rows_[k]];
    const double mean = sum / static_cast<double>(n);

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({-1, 0.0, -1, -1, mean, n});

    if (depth >= params_.max_depth || n < static_cast<std::size_t>(params_.min_samples_split)) {
      return id;
    }
    const double first = y_[rows_[begin]];
    bool pure = true;
    for (std::size_t k = begin + 1; k < end && pure; ++k) pure = y_[rows_[k]] == first;
    if (pure) return id;

    // Centred sums keep the variance computation well conditioned.
    double total1 = 0.0;
    double total2 = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const double c = y_[rows_[k]] - mean;
      total1 += c;
      total2 += c * c;
    }
    const double nd = static_cast<double>(n);
    const double sd_parent = sd_from_sums(total1, total2, nd);
    const std::size_t min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);

    choose_features();
    Candidate best;
    for (const std::size_t f : features_) {
      buf_.clear();
      for (std::size_t k = begin; k < end; ++k) {
        buf_.emplace_back(x_.feature(rows_[k], f), y_[rows_[k]] - mean);
      }
      std::sort(buf_.begin(), buf_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double s1 = 0.0;
      double s2 = 0.0;
      for (std::size_t k = 1; k < n; ++k) {
        s1 += buf_[k - 1].second;
        s2 += buf_[k - 1].second * buf_[k - 1].second;
        if (!(buf_[k - 1].first < buf_[k].first)) continue;
        if (k < min_leaf || n - k < min_leaf) continue;
        const double kl = static_cast<double>(k);
        const double kr = nd - kl;
        const double sdr = sd_parent - (kl / nd * sd_from_sums(s1, s2, kl) +
                                        kr / nd * sd_from_sums(total1 - s1, total2 - s2, kr));
        if (sdr > best.sdr) {
          const double lo = buf_[k - 1].first;
          const double hi = buf_[k].first;
          double mid = 0.5 * (lo + hi);
          if (!(mid < hi)) mid = lo;
          best = {sdr, static_cast<int>(f), mid};
        }
      }
    }
    if (best.feature < 0) return id;

    const auto f = static_cast<std::size_t>(best.feature);
    const auto split_at = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::size_t r) { return x_.feature(r, f) <= best.threshold; });
    const auto mid = static_cast<std::size_t>(split_at - rows_.begin());

    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  const Dataset& x_;
  std::span<const double> y_;
  const TreeParams& params_;
  FeatureSampling sampling_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> pool_;
  std::vector<std::size_t> features_;
  std::vector<std::pair<double, double>> buf_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree grow_tree(const Dataset& x, std::span<const double> targets,
                         std::span<const std::size_t> rows, const TreeParams& params,
                         const FeatureSampling& sampling) {
  params.validate();
  if (rows.empty()) throw Error(ErrorKind::fit, "tree on empty dataset");
  if (targets.size() != x.size()) throw Error(ErrorKind::fit, "targets do not match rows");
  TreeBuilder builder(x, targets, params, sampling);
  return RegressionTree(x.dim(), builder.run({rows.begin(), rows.end()}));
}

RegressionTree fit_tree(const Dataset& train, const TreeParams& params, Seed /*seed*/) {
  if (train.empty()) throw Error(ErrorKind::fit, "tree on empty dataset");
  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return grow_tree(train, train.targets(), rows, params);
}

}  // namespace rssi
