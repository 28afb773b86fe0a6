#include "rssi/tuning.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>

#include "rssi/error.hpp"
#include "text.hpp"

namespace rssi {

std::size_t HyperGrid::size() const noexcept {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::vector<GridPoint> HyperGrid::points() const {
  std::vector<GridPoint> out;
  const std::size_t total = size();
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    GridPoint p(axes.size());
    std::size_t rem = flat;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& axis = axes[a];
      p[a] = {axis.name, axis.values[rem % axis.values.size()]};
      rem /= axis.values.size();
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::vector<GridAxis> tree_axes(bool reduced) {
  if (reduced) {
    return {{"max_depth", {20, 100, 1000}},
            {"min_samples_split", {2, 10}},
            {"min_samples_leaf", {2, 10}}};
  }
  return {{"max_depth", {20, 50, 80, 100, 300, 500, 1000}},
          {"min_samples_split", {2, 5, 10}},
          {"min_samples_leaf", {2, 5, 10}}};
}

HyperGrid make_grid(ModelKind kind, bool reduced) {
  HyperGrid g{kind, {}};
  const std::vector<double> counts =
      reduced ? std::vector<double>{10, 100, 300} : std::vector<double>{10, 20, 50, 100, 300, 500};
  switch (kind) {
    case ModelKind::linear:
      break;
    case ModelKind::svr:
      g.axes = {{"c", {0.1, 1, 10, 100}}, {"epsilon", {0.1, 0.5, 1.0}}};
      break;
    case ModelKind::tree:
      g.axes = tree_axes(reduced);
      break;
    case ModelKind::forest:
      g.axes = tree_axes(reduced);
      g.axes.push_back({"n_trees", counts});
      break;
    case ModelKind::gbt:
      g.axes = tree_axes(reduced);
      g.axes.push_back({"n_stages", counts});
      g.axes.push_back({"learning_rate", {0.05, 0.1, 0.3}});
      break;
  }
  return g;
}

int as_int(const std::string& name, double v) {
  if (v != std::floor(v)) throw Error(ErrorKind::config, name + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

HyperGrid paper_grid(ModelKind kind) { return make_grid(kind, false); }
HyperGrid reduced_grid(ModelKind kind) { return make_grid(kind, true); }

ModelConfigs apply_point(ModelConfigs base, ModelKind kind, const GridPoint& point) {
  TreeParams* tree = kind == ModelKind::forest ? &base.forest.tree
                     : kind == ModelKind::gbt  ? &base.gbt.tree
                                               : &base.tree;
  for (const auto& [name, v] : point) {
    if (name == "max_depth") {
      tree->max_depth = as_int(name, v);
    } else if (name == "min_samples_split") {
      tree->min_samples_split = as_int(name, v);
    } else if (name == "min_samples_leaf") {
      tree->min_samples_leaf = as_int(name, v);
    } else if (name == "n_trees") {
      base.forest.n_trees = as_int(name, v);
    } else if (name == "m_features") {
      base.forest.m_features = static_cast<std::size_t>(as_int(name, v));
    } else if (name == "n_stages") {
      base.gbt.n_stages = as_int(name, v);
    } else if (name == "learning_rate") {
      base.gbt.learning_rate = v;
    } else if (name == "c") {
      base.svr.c = v;
    } else if (name == "epsilon") {
      base.svr.epsilon = v;
    } else if (name == "gamma") {
      base.svr.kernel.gamma = v;
    } else {
      throw Error(ErrorKind::config, "unknown grid axis '" + name + "'");
    }
  }
  return base;
}

std::string format_point(const GridPoint& point) {
  std::string s;
  for (const auto& [name, v] : point) {
    if (!s.empty()) s += ' ';
    s += name + '=' + text::format_double(v);
  }
  return s.empty() ? "(defaults)" : s;
}

namespace {

Trial run_trial(const Dataset& fit, const Dataset& val, ModelKind kind, const ModelConfigs& base,
                const GridPoint& point, Seed seed) {
  const auto configs = apply_point(base, kind, point);
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = fit_model(kind, configs, fit, seed);
  const auto t1 = std::chrono::steady_clock::now();
  const auto predicted = predict_all(*model, val);
  const auto m = score(val.targets(), predicted);
  return {point, m.mae_db, m.mse_db2, std::chrono::duration<double>(t1 - t0).count()};
}

struct Folds {
  Dataset fit;
  Dataset val;
};

Folds make_folds(const Dataset& train, const HyperGrid& grid, double val_fraction, Seed seed) {
  if (grid.size() == 0) throw Error(ErrorKind::config, "empty hyperparameter grid");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorKind::split, "val_fraction must lie in (0, 1)");
  }
  const auto val_count =
      static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(train.size())));
  if (val_count == 0 || val_count >= train.size()) {
    throw Error(ErrorKind::split, "validation split leaves an empty fold");
  }
  auto [fit, val] = split(train, train.size() - val_count, seed);
  return {std::move(fit), std::move(val)};
}

TuneResult finish(const HyperGrid& grid, const ModelConfigs& base, std::vector<Trial> trials) {
  TuneResult r;
  r.kind = grid.kind;
  std::size_t best = 0;
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (trials[i].val_mse < trials[best].val_mse) best = i;
  }
  r.best_params = trials[best].params;
  r.best_val_mse = trials[best].val_mse;
  r.best_configs = apply_point(base, grid.kind, r.best_params);
  r.trials = std::move(trials);
  return r;
}

}  // namespace

TuneResult grid_search(const Dataset& train, const HyperGrid& grid, const ModelConfigs& base,
                       double val_fraction, Seed seed) {
  const auto folds = make_folds(train, grid, val_fraction, seed);
  const auto points = grid.points();
  std::vector<Trial> trials(points.size());
  std::optional<Error> failure;
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      trials[k] = run_trial(folds.fit, folds.val, grid.kind, base, points[k], seed);
    } catch (const Error& e) {
#pragma omp critical(rssi_tune_error)
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;
  return finish(grid, base, std::move(trials));
}

TuneResult grid_search_serial(const Dataset& train, const HyperGrid& grid,
                              const ModelConfigs& base, double val_fraction, Seed seed) {
  const auto folds = make_folds(train, grid, val_fraction, seed);
  std::vector<Trial> trials;
  for (const auto& p : grid.points()) {
    trials.push_back(run_trial(folds.fit, folds.val, grid.kind, base, p, seed));
  }
  return finish(grid, base, std::move(trials));
}

void write_trials_csv(std::ostream& out, const HyperGrid& grid, const TuneResult& result,
                      bool include_timing) {
  for (const auto& a : grid.axes) out << a.name << ',';
  out << "val_mae,val_mse";
  if (include_timing) out << ",fit_seconds";
  out << '\n';
  for (const auto& t : result.trials) {
    for (const auto& [name, v] : t.params) out << text::format_double(v) << ',';
    out << text::format_double(t.val_mae) << ',' << text::format_double(t.val_mse);
    if (include_timing) out << ',' << text::format_double(t.fit_seconds);
    out << '\n';
  }
}

}  // namespace rssi
