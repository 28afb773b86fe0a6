#include "rssi/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>

#include "model_io.hpp"
#include "rssi/error.hpp"

namespace rssi {

void ForestParams::validate(std::size_t dim) const {
  tree.validate();
  if (n_trees <= 0) throw Error(ErrorKind::config, "n_trees must be > 0");
  if (m_features > dim) {
    throw Error(ErrorKind::config, "m_features exceeds the feature count");
  }
}

std::size_t ForestParams::resolved_m_features(std::size_t dim) const noexcept {
  if (m_features != 0) return m_features;
  return std::max<std::size_t>(1, (dim + 1) / 2);
}

ForestModel::ForestModel(std::size_t dim, std::vector<RegressionTree> trees,
                         std::vector<std::vector<std::size_t>> oob_indices, bool bootstrap)
    : dim_(dim), trees_(std::move(trees)), oob_(std::move(oob_indices)), bootstrap_(bootstrap) {
  if (trees_.empty()) throw Error(ErrorKind::fit, "forest has no trees");
  if (bootstrap_ && oob_.size() != trees_.size()) {
    throw Error(ErrorKind::fit, "one out-of-bag list per tree required");
  }
  for (const auto& t : trees_) {
    if (t.dim() != dim_) throw Error(ErrorKind::fit, "tree dimension differs from forest");
  }
}

double ForestModel::predict(std::span<const double> x) const {
  check_dim(x);
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.predict(x);
  return sum / static_cast<double>(trees_.size());
}

void ForestModel::write(std::ostream& out) const {
  out << "dim " << dim_ << "\ntrees " << trees_.size() << '\n';
  for (const auto& t : trees_) {
    out << "tree\n";
    t.write(out);
  }
}

ForestModel ForestModel::read(io::LineReader& in) {
  const auto dim = static_cast<std::size_t>(in.integer("dim"));
  const auto count = static_cast<std::size_t>(in.integer("trees"));
  std::vector<RegressionTree> trees;
  trees.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    in.expect("tree");
    trees.push_back(RegressionTree::read(in));
  }
  return ForestModel(dim, std::move(trees), {}, false);
}

namespace {

struct Member {
  std::optional<RegressionTree> tree;
  std::vector<std::size_t> oob;
};

Member grow_member(const Dataset& train, const ForestParams& params, std::size_t index) {
  Rng rng(derive_seed(params.seed, index));
  const std::size_t n = train.size();
  std::vector<std::size_t> rows(n);
  Member m;
  if (params.bootstrap) {
    std::vector<char> in_bag(n, 0);
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    for (auto& r : rows) {
      r = draw(rng);
      in_bag[r] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_bag[i]) m.oob.push_back(i);
    }
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  const FeatureSampling sampling{params.resolved_m_features(train.dim()), &rng};
  m.tree.emplace(grow_tree(train, train.targets(), rows, params.tree, sampling));
  return m;
}

ForestModel assemble(const Dataset& train, const ForestParams& params,
                     std::vector<Member>& members) {
  std::vector<RegressionTree> trees;
  std::vector<std::vector<std::size_t>> oob;
  trees.reserve(members.size());
  for (auto& m : members) {
    trees.push_back(std::move(*m.tree));
    if (params.bootstrap) oob.push_back(std::move(m.oob));
  }
  return ForestModel(train.dim(), std::move(trees), std::move(oob), params.bootstrap);
}

void check_forest_inputs(const Dataset& train, const ForestParams& params) {
  if (train.empty()) throw Error(ErrorKind::fit, "forest on empty dataset");
  params.validate(train.dim());
}

}  // namespace

ForestModel fit_forest(const Dataset& train, const ForestParams& params) {
  check_forest_inputs(train, params);
  const auto count = static_cast<std::ptrdiff_t>(params.n_trees);
  std::vector<Member> members(static_cast<std::size_t>(count));
  std::optional<Error> failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    try {
      members[static_cast<std::size_t>(t)] = grow_member(train, params, static_cast<std::size_t>(t));
    } catch (const Error& e) {
#pragma omp critical(rssi_forest_error)
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;
  return assemble(train, params, members);
}

ForestModel fit_forest_serial(const Dataset& train, const ForestParams& params) {
  check_forest_inputs(train, params);
  std::vector<Member> members;
  members.reserve(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    members.push_back(grow_member(train, params, static_cast<std::size_t>(t)));
  }
  return assemble(train, params, members);
}

std::vector<double> predict_batch(const ForestModel& model, const Dataset& data) {
  if (data.dim() != model.dim() && !data.empty()) {
    throw Error(ErrorKind::predict, "forest batch dimension mismatch");
  }
  std::vector<double> out(data.size());
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = model.predict(data.row(static_cast<std::size_t>(i)));
  }
  return out;
}

std::vector<double> predict_batch_serial(const ForestModel& model, const Dataset& data) {
  return predict_all(model, data);
}

namespace {

struct OobSums {
  std::vector<double> sum;
  std::vector<std::size_t> votes;
};

void check_oob_inputs(const ForestModel& model, const Dataset& train) {
  if (!model.bootstrapped()) {
    throw Error(ErrorKind::oob_unavailable, "out-of-bag error needs a bootstrapped forest");
  }
  if (train.dim() != model.dim()) throw Error(ErrorKind::predict, "OOB dimension mismatch");
  for (const auto& list : model.oob_indices()) {
    if (!list.empty() && list.back() >= train.size()) {
      throw Error(ErrorKind::oob_unavailable, "OOB indices exceed the training set size");
    }
  }
}

// Sums tree predictions for one row over the trees that excluded it, in
// ascending tree order.
void oob_row(const ForestModel& model, const Dataset& train, std::size_t i, OobSums& acc) {
  const auto& trees = model.trees();
  const auto& oob = model.oob_indices();
  for (std::size_t t = 0; t < trees.size(); ++t) {
    if (std::binary_search(oob[t].begin(), oob[t].end(), i)) {
      acc.sum[i] += trees[t].predict(train.row(i));
      ++acc.votes[i];
    }
  }
}

MetricPair finish_oob(const Dataset& train, const OobSums& acc) {
  std::vector<double> actual;
  std::vector<double> predicted;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (acc.votes[i] == 0) continue;
    actual.push_back(train.target(i));
    predicted.push_back(acc.sum[i] / static_cast<double>(acc.votes[i]));
  }
  if (actual.empty()) {
    throw Error(ErrorKind::oob_unavailable, "no training row is out-of-bag for any tree");
  }
  return score(actual, predicted);
}

}  // namespace

MetricPair oob_error(const ForestModel& model, const Dataset& train) {
  check_oob_inputs(model, train);
  OobSums acc{std::vector<double>(train.size(), 0.0), std::vector<std::size_t>(train.size(), 0)};
  const auto n = static_cast<std::ptrdiff_t>(train.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) oob_row(model, train, static_cast<std::size_t>(i), acc);
  return finish_oob(train, acc);
}

MetricPair oob_error_serial(const ForestModel& model, const Dataset& train) {
  check_oob_inputs(model, train);
  OobSums acc{std::vector<double>(train.size(), 0.0), std::vector<std::size_t>(train.size(), 0)};
  for (std::size_t i = 0; i < train.size(); ++i) oob_row(model, train, i, acc);
  return finish_oob(train, acc);
}

void GbtParams::validate() const {
  tree.validate();
  if (n_stages <= 0) throw Error(ErrorKind::config, "n_stages must be > 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw Error(ErrorKind::config, "learning_rate must lie in (0, 1]");
  }
}

GbtModel::GbtModel(std::size_t dim, double base_value, std::vector<GbtStage> stages)
    : dim_(dim), base_(base_value), stages_(std::move(stages)) {
  for (const auto& s : stages_) {
    if (s.tree.dim() != dim_) throw Error(ErrorKind::fit, "stage dimension differs from model");
  }
}

double GbtModel::predict(std::span<const double> x) const {
  return predict_staged(x, stages_.size());
}

double GbtModel::predict_staged(std::span<const double> x, std::size_t stages) const {
  check_dim(x);
  double f = base_;
  const std::size_t k = std::min(stages, stages_.size());
  for (std::size_t s = 0; s < k; ++s) f += stages_[s].learning_rate * stages_[s].tree.predict(x);
  return f;
}

void GbtModel::write(std::ostream& out) const {
  out << "dim " << dim_ << "\nbase " << text::format_double(base_) << "\nstages "
      << stages_.size() << '\n';
  for (const auto& s : stages_) {
    out << "stage " << text::format_double(s.learning_rate) << '\n';
    s.tree.write(out);
  }
}

GbtModel GbtModel::read(io::LineReader& in) {
  const auto dim = static_cast<std::size_t>(in.integer("dim"));
  const double base = in.number("base");
  const auto count = static_cast<std::size_t>(in.integer("stages"));
  std::vector<GbtStage> stages;
  stages.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double lr = in.number("stage");
    stages.push_back({RegressionTree::read(in), lr});
  }
  return GbtModel(dim, base, std::move(stages));
}

GbtModel fit_gbt(const Dataset& train, const GbtParams& params) {
  params.validate();
  if (train.empty()) throw Error(ErrorKind::fit, "gbt on empty dataset");
  const std::size_t n = train.size();

  double sum = 0.0;
  for (double y : train.targets()) sum += y;
  const double base = sum / static_cast<double>(n);

  std::vector<double> fitted(n, base);
  std::vector<double> residual(n);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});

  std::vector<GbtStage> stages;
  stages.reserve(static_cast<std::size_t>(params.n_stages));
  for (int s = 0; s < params.n_stages; ++s) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = train.target(i) - fitted[i];
    auto tree = grow_tree(train, residual, rows, params.tree);
    for (std::size_t i = 0; i < n; ++i) {
      fitted[i] += params.learning_rate * tree.predict(train.row(i));
    }
    stages.push_back({std::move(tree), params.learning_rate});
  }
  return GbtModel(train.dim(), base, std::move(stages));
}

}  // namespace rssi
