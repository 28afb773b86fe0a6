#include "rssi/paper_run.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rssi/error.hpp"
#include "text.hpp"

namespace rssi {

namespace {

constexpr std::uint64_t kSplitStream = 2;
constexpr std::uint64_t kTuneStream = 3;

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

void write_tree_params(std::ostream& out, const char* prefix, const TreeParams& p) {
  out << prefix << "max_depth = " << p.max_depth << '\n'
      << prefix << "min_samples_split = " << p.min_samples_split << '\n'
      << prefix << "min_samples_leaf = " << p.min_samples_leaf << '\n';
}

void write_configs(std::ostream& out, const ModelConfigs& c) {
  const auto d = text::format_double;
  out << "svr.c = " << d(c.svr.c) << '\n'
      << "svr.epsilon = " << d(c.svr.epsilon) << '\n'
      << "svr.kernel = " << (c.svr.kernel.type == KernelType::rbf ? "rbf" : "linear") << '\n'
      << "svr.gamma = " << d(c.svr.kernel.gamma) << '\n'
      << "svr.tol = " << d(c.svr.tol) << '\n'
      << "svr.max_passes = " << c.svr.max_passes << '\n';
  write_tree_params(out, "tree.", c.tree);
  out << "forest.n_trees = " << c.forest.n_trees << '\n'
      << "forest.m_features = " << c.forest.m_features << '\n'
      << "forest.bootstrap = " << (c.forest.bootstrap ? "true" : "false") << '\n';
  write_tree_params(out, "forest.", c.forest.tree);
  out << "gbt.n_stages = " << c.gbt.n_stages << '\n'
      << "gbt.learning_rate = " << d(c.gbt.learning_rate) << '\n';
  write_tree_params(out, "gbt.", c.gbt.tree);
}

GridBounds data_bounds(const std::vector<GeoSample>& samples) {
  GridBounds b{samples.front().latitude_e6, samples.front().latitude_e6,
               samples.front().longitude_e6, samples.front().longitude_e6};
  for (const auto& s : samples) {
    b.lat_min = std::min(b.lat_min, s.latitude_e6);
    b.lat_max = std::max(b.lat_max, s.latitude_e6);
    b.lon_min = std::min(b.lon_min, s.longitude_e6);
    b.lon_max = std::max(b.lon_max, s.longitude_e6);
  }
  return b;
}

}  // namespace

void PaperRunOptions::validate() const {
  field.validate();
  if (sample_count < 2) throw Error(ErrorKind::config, "paper-run: need at least 2 samples");
  if (train_count == 0 || train_count >= sample_count) {
    throw Error(ErrorKind::config, "paper-run: train count must lie in (0, samples)");
  }
  if (!(walk_radius_m > 0.0)) throw Error(ErrorKind::config, "paper-run: radius must be positive");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorKind::config, "paper-run: val_fraction must lie in (0, 1)");
  }
  if (grid_rows < 2 || grid_cols < 2) throw Error(ErrorKind::config, "paper-run: grid too small");
  if (kinds.empty()) throw Error(ErrorKind::config, "paper-run: no model families selected");
}

void PaperRunOptions::write(std::ostream& out) const {
  const auto d = text::format_double;
  out << "seed = " << seed << '\n'
      << "samples = " << sample_count << '\n'
      << "train = " << train_count << '\n'
      << "radius = " << d(walk_radius_m) << '\n'
      << "tx_lat = " << field.tx_lat_e6 << '\n'
      << "tx_lon = " << field.tx_lon_e6 << '\n'
      << "p0 = " << d(field.p0_db) << '\n'
      << "d0 = " << d(field.d0_m) << '\n'
      << "exponent = " << d(field.exponent_n) << '\n'
      << "sigma = " << d(field.shadow_sigma_db) << '\n'
      << "meters_per_e6 = " << d(field.meters_per_e6) << '\n'
      << "use_distance = " << (use_distance ? "true" : "false") << '\n'
      << "grids = " << (reduced_grids ? "reduced" : "full") << '\n'
      << "val_fraction = " << d(val_fraction) << '\n'
      << "grid_rows = " << grid_rows << '\n'
      << "grid_cols = " << grid_cols << '\n'
      << "models = ";
  for (std::size_t i = 0; i < kinds.size(); ++i) out << (i ? "," : "") << to_string(kinds[i]);
  out << '\n';
  write_configs(out, base);
}

HyperGrid run_grid(ModelKind kind, bool reduced) {
  return reduced ? reduced_grid(kind) : paper_grid(kind);
}

PaperRunResult paper_run(const PaperRunOptions& options, const std::filesystem::path& out_dir) {
  options.validate();
  const bool emit = !out_dir.empty();
  if (emit) std::filesystem::create_directories(out_dir);

  const auto raw = generate_walk(options.field, options.sample_count, options.walk_radius_m,
                                 options.seed);
  const auto cleaned = clean(raw).kept;
  if (cleaned.size() <= options.train_count) {
    throw Error(ErrorKind::split, "paper-run: only " + std::to_string(cleaned.size()) +
                                      " samples survive cleaning");
  }
  const auto data = make_dataset(cleaned, options.use_distance,
                                 "synthetic walk seed " + std::to_string(options.seed));
  const auto [train, test] = split(data, options.train_count, derive_seed(options.seed, kSplitStream));

  std::vector<HyperGrid> grids;
  std::vector<TuneResult> tuning;
  ModelConfigs tuned = options.base;
  for (const auto kind : options.kinds) {
    grids.push_back(run_grid(kind, options.reduced_grids));
    tuning.push_back(grid_search(train, grids.back(), options.base, options.val_fraction,
                                 derive_seed(options.seed, kTuneStream)));
    const auto& best = tuning.back().best_configs;
    switch (kind) {
      case ModelKind::linear: break;
      case ModelKind::svr: tuned.svr = best.svr; break;
      case ModelKind::tree: tuned.tree = best.tree; break;
      case ModelKind::forest: tuned.forest = best.forest; break;
      case ModelKind::gbt: tuned.gbt = best.gbt; break;
    }
  }

  std::vector<std::unique_ptr<Regressor>> models;
  auto report = compare_models(train, test, tuned, options.seed, options.kinds,
                               options.latency_repeats, &models);

  const auto bounds = data_bounds(cleaned);
  const std::optional<TxSite> site = options.field.site();
  auto truth = field_grid(options.field, bounds, options.grid_rows, options.grid_cols);
  std::unique_ptr<Regressor> refit;
  const Regressor* forest_model = nullptr;
  const auto fpos = std::find(options.kinds.begin(), options.kinds.end(), ModelKind::forest);
  if (fpos != options.kinds.end()) {
    forest_model = models[static_cast<std::size_t>(fpos - options.kinds.begin())].get();
  } else {
    refit = fit_model(ModelKind::forest, tuned, train, options.seed);
    forest_model = refit.get();
  }
  auto forest = predict_grid(*forest_model, bounds, options.grid_rows, options.grid_cols, site);
  const auto overlay = overlay_compare(truth, forest);

  if (emit) {
    auto path = out_dir / "config.txt";
    auto out = open_out(path);
    options.write(out);
    close_out(out, path);

    path = out_dir / "tuned.txt";
    out = open_out(path);
    for (std::size_t i = 0; i < tuning.size(); ++i) {
      out << to_string(tuning[i].kind) << " = " << format_point(tuning[i].best_params)
          << " val_mse " << text::format_double(tuning[i].best_val_mse) << '\n';
    }
    write_configs(out, tuned);
    close_out(out, path);

    save_csv(out_dir / "dataset.csv", cleaned);

    path = out_dir / "timing_tuning.csv";
    auto timing = open_out(path);
    timing << "model,trial,fit_seconds\n";
    for (std::size_t i = 0; i < tuning.size(); ++i) {
      const auto name = std::string(to_string(tuning[i].kind));
      auto tp = out_dir / ("trials_" + name + ".csv");
      auto tout = open_out(tp);
      write_trials_csv(tout, grids[i], tuning[i], false);
      close_out(tout, tp);
      for (std::size_t t = 0; t < tuning[i].trials.size(); ++t) {
        timing << name << ',' << t << ',' << text::format_double(tuning[i].trials[t].fit_seconds)
               << '\n';
      }
      save_model(*models[i], out_dir / ("model_" + name + ".txt"));
    }
    close_out(timing, path);

    path = out_dir / "metrics.csv";
    out = open_out(path);
    report.write_csv(out, false);
    close_out(out, path);

    path = out_dir / "timing_report.csv";
    out = open_out(path);
    report.write_csv(out, true);
    close_out(out, path);

    path = out_dir / "timing_report.txt";
    out = open_out(path);
    report.write_text(out);
    close_out(out, path);

    path = out_dir / "timing_report.json";
    out = open_out(path);
    out << report.to_json() << '\n';
    close_out(out, path);

    export_grid(truth, GridFormat::csv, out_dir / "grid_truth.csv");
    export_grid(truth, GridFormat::pgm, out_dir / "grid_truth.pgm");
    export_grid(forest, GridFormat::csv, out_dir / "grid_forest.csv");
    export_grid(forest, GridFormat::pgm, out_dir / "grid_forest.pgm");

    path = out_dir / "overlay.txt";
    out = open_out(path);
    out << "mae_db = " << text::format_double(overlay.mae_db) << '\n'
        << "mse_db2 = " << text::format_double(overlay.mse_db2) << '\n'
        << "cells = " << overlay.n << '\n';
    close_out(out, path);
  }

  return {std::move(report), std::move(grids), std::move(tuning), tuned, std::move(truth),
          std::move(forest), overlay};
}

}  // namespace rssi
