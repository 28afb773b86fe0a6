#include "rssi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rssi/error.hpp"
#include "rssi/evaluate.hpp"
#include "rssi/fieldmap.hpp"
#include "rssi/paper_run.hpp"
#include "rssi/powerctl.hpp"
#include "rssi/tuning.hpp"
#include "text.hpp"

namespace rssi::cli {

namespace {

const std::vector<std::string> kCommands{"gen",     "train",    "tune",     "eval",
                                         "heatmap", "powersim", "paper-run"};

// Keys that belong to the top-level app rather than a subcommand.
const std::vector<std::string> kGlobalKeys{"seed"};

struct FieldFlags {
  FieldModel field{};
  double radius = 150.0;

  void add(CLI::App* sub) {
    sub->add_option("--tx-lat", field.tx_lat_e6, "transmitter latitude x1e6");
    sub->add_option("--tx-lon", field.tx_lon_e6, "transmitter longitude x1e6");
    sub->add_option("--p0", field.p0_db, "RSSI at reference distance (dB)");
    sub->add_option("--d0", field.d0_m, "reference distance (m)");
    sub->add_option("--exponent", field.exponent_n, "path-loss exponent");
    sub->add_option("--sigma", field.shadow_sigma_db, "shadowing std-dev (dB)");
    sub->add_option("--meters-per-e6", field.meters_per_e6, "meters per coordinate unit");
    sub->add_option("--radius", radius, "walk radius (m)");
  }
};

struct ModelFlags {
  std::optional<double> c, epsilon, gamma, tol, learning_rate;
  std::optional<std::string> kernel;
  std::optional<int> max_passes, max_depth, min_split, min_leaf, n_trees, n_stages;
  std::optional<std::size_t> m_features;
  std::optional<bool> bootstrap;

  void add(CLI::App* sub) {
    sub->add_option("--c", c, "SVR box constraint");
    sub->add_option("--epsilon", epsilon, "SVR tube half-width");
    sub->add_option("--kernel", kernel, "SVR kernel")->check(CLI::IsMember({"rbf", "linear"}));
    sub->add_option("--gamma", gamma, "RBF width (0 = 1/dim)");
    sub->add_option("--tol", tol, "SVR KKT tolerance");
    sub->add_option("--max-passes", max_passes, "SVR iteration budget per sample");
    sub->add_option("--max-depth", max_depth, "tree depth limit");
    sub->add_option("--min-samples-split", min_split, "smallest node that may split");
    sub->add_option("--min-samples-leaf", min_leaf, "smallest allowed leaf");
    sub->add_option("--n-trees", n_trees, "forest size");
    sub->add_option("--m-features", m_features, "features tried per split (0 = half)");
    sub->add_option("--bootstrap", bootstrap, "bag the forest");
    sub->add_option("--n-stages", n_stages, "boosting stages");
    sub->add_option("--learning-rate", learning_rate, "boosting shrinkage");
  }

  ModelConfigs apply(ModelConfigs cfg) const {
    if (c) cfg.svr.c = *c;
    if (epsilon) cfg.svr.epsilon = *epsilon;
    if (kernel) cfg.svr.kernel.type = *kernel == "linear" ? KernelType::linear : KernelType::rbf;
    if (gamma) cfg.svr.kernel.gamma = *gamma;
    if (tol) cfg.svr.tol = *tol;
    if (max_passes) cfg.svr.max_passes = *max_passes;
    for (auto* t : {&cfg.tree, &cfg.forest.tree, &cfg.gbt.tree}) {
      if (max_depth) t->max_depth = *max_depth;
      if (min_split) t->min_samples_split = *min_split;
      if (min_leaf) t->min_samples_leaf = *min_leaf;
    }
    if (n_trees) cfg.forest.n_trees = *n_trees;
    if (m_features) cfg.forest.m_features = *m_features;
    if (bootstrap) cfg.forest.bootstrap = *bootstrap;
    if (n_stages) cfg.gbt.n_stages = *n_stages;
    if (learning_rate) cfg.gbt.learning_rate = *learning_rate;
    return cfg;
  }
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

// Writes to `path`, or to the standard stream when path is "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& stdout_stream, Fn&& fn,
          std::ios::openmode mode = std::ios::out) {
  if (path == "-") {
    fn(stdout_stream);
    return;
  }
  std::ofstream f(path, mode);
  if (!f) throw Error(ErrorKind::io, "cannot write " + path);
  fn(f);
  f.close();
  if (!f) throw Error(ErrorKind::io, "write failed for " + path);
}

std::string option_value(const CLI::Option* o) {
  if (o->count() > 0) {
    std::string joined;
    for (const auto& r : o->results()) joined += (joined.empty() ? "" : ",") + r;
    return joined;
  }
  return o->get_default_str();
}

// Resolved settings of the chosen subcommand, in a form `--config` accepts.
void write_resolved(std::ostream& out, const CLI::App& app, const CLI::App& sub) {
  out << "# " << sub.get_name() << '\n';
  auto dump = [&](const CLI::App& a) {
    for (const auto* o : a.get_options()) {
      if (o->get_lnames().empty() || o->get_lnames().front() == "help" ||
          o->get_lnames().front() == "config") {
        continue;
      }
      const auto v = option_value(o);
      if (v.empty()) continue;
      out << o->get_lnames().front() << " = " << v << '\n';
    }
  };
  dump(app);
  dump(sub);
}

void write_resolved_beside(const std::string& path, const CLI::App& app, const CLI::App& sub) {
  if (path == "-") return;
  emit(path + ".config.txt", std::cout, [&](std::ostream& o) { write_resolved(o, app, sub); });
}

std::pair<Dataset, Dataset> load_split(const std::string& data, const std::string& train_path,
                                       const std::string& test_path, bool use_distance,
                                       std::size_t train_count, double train_fraction, Seed seed) {
  if (!train_path.empty() || !test_path.empty()) {
    if (train_path.empty() || test_path.empty()) {
      throw Error(ErrorKind::config, "--train and --test must be given together");
    }
    return {make_dataset(load_csv(train_path), use_distance, train_path),
            make_dataset(load_csv(test_path), use_distance, test_path)};
  }
  if (data.empty()) throw Error(ErrorKind::config, "need --data or --train/--test");
  const auto all = make_dataset(load_csv(data), use_distance, data);
  if (train_count == 0) {
    train_count = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(all.size())));
  }
  return split(all, train_count, seed);
}

std::vector<ModelKind> parse_kinds(const std::string& list) {
  std::vector<ModelKind> kinds;
  if (list == "all") return {kAllModelKinds.begin(), kAllModelKinds.end()};
  for (const auto part : text::split(list, ',')) kinds.push_back(parse_model_kind(text::trim(part)));
  if (kinds.empty()) throw Error(ErrorKind::config, "empty model list");
  return kinds;
}

// Splices config-file settings into the argument list as `--key=value`, placed
// so that flags given explicitly on the command line come later and win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  const auto entries = read_config_file(*path);
  const auto cmd = std::find_first_of(args.begin(), args.end(), kCommands.begin(), kCommands.end());
  std::vector<std::string> global;
  std::vector<std::string> local;
  for (auto [key, value] : entries) {
    std::replace(key.begin(), key.end(), '_', '-');
    auto& dst = std::find(kGlobalKeys.begin(), kGlobalKeys.end(), key) != kGlobalKeys.end()
                    ? global
                    : local;
    dst.push_back("--" + key + "=" + value);
  }
  const auto cmd_pos = cmd - args.begin();
  if (cmd != args.end()) {
    args.insert(args.begin() + cmd_pos + 1, local.begin(), local.end());
  } else if (!local.empty()) {
    throw CLI::ValidationError("--config", "config file needs a subcommand");
  }
  args.insert(args.begin(), global.begin(), global.end());
  return args;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#' || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::config, path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = text::trim(t.substr(0, eq));
    auto value = text::trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw Error(ErrorKind::config, path + ":" + std::to_string(lineno) + ": empty key");
    }
    entries.emplace_back(std::string(key), std::string(value));
  }
  return entries;
}

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"RSSI regression toolkit", "rssi"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  Seed seed = 7;
  app.add_option("--seed", seed, "master RNG seed");
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value settings file (flags override)");

  // gen
  auto* gen = app.add_subcommand("gen", "synthesize a measurement walk as CSV");
  FieldFlags gen_field;
  gen_field.add(gen);
  std::size_t gen_count = 10000;
  std::string gen_out = "-";
  bool gen_clean = false;
  gen->add_option("--count", gen_count, "number of samples")->check(CLI::PositiveNumber);
  gen->add_flag("--clean", gen_clean, "drop out-of-range and duplicate rows");
  gen->add_option("-o,--out", gen_out, "output CSV ('-' for stdout)");

  // shared dataset flags
  struct DataFlags {
    std::string data, train, test;
    bool use_distance = true;
    std::size_t train_count = 0;
    double train_fraction = 0.4;
  };
  auto add_data = [](CLI::App* sub, DataFlags& d, bool with_split) {
    sub->add_option("--data", d.data, "dataset CSV");
    sub->add_flag("--use-distance,!--no-distance", d.use_distance, "include the distance feature");
    if (with_split) {
      sub->add_option("--train", d.train, "training CSV (with --test)");
      sub->add_option("--test", d.test, "test CSV (with --train)");
      sub->add_option("--train-count", d.train_count, "training rows taken from --data");
      sub->add_option("--train-fraction", d.train_fraction,
                      "training share of --data when no count is given");
    }
  };

  // train
  auto* train = app.add_subcommand("train", "fit one model and write it out");
  DataFlags train_data;
  add_data(train, train_data, false);
  ModelFlags train_model;
  train_model.add(train);
  std::string train_kind = "forest";
  std::string train_out;
  train->add_option("--model", train_kind, "linear|svr|tree|forest|gbt");
  train->add_option("-o,--out", train_out, "model file")->required();

  // tune
  auto* tune = app.add_subcommand("tune", "grid search one family on a holdout");
  DataFlags tune_data;
  add_data(tune, tune_data, false);
  ModelFlags tune_model;
  tune_model.add(tune);
  std::string tune_kind = "tree";
  std::string tune_grid = "full";
  double tune_val = 0.25;
  std::string tune_out = "-";
  tune->add_option("--model", tune_kind, "linear|svr|tree|forest|gbt");
  tune->add_option("--grid", tune_grid, "full|reduced")->check(CLI::IsMember({"full", "reduced"}));
  tune->add_option("--val-fraction", tune_val, "validation share of the data");
  tune->add_option("-o,--out", tune_out, "trials CSV ('-' for stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "compare model families on a train/test split");
  DataFlags eval_data;
  add_data(eval, eval_data, true);
  ModelFlags eval_model;
  eval_model.add(eval);
  std::string eval_models = "all";
  std::string eval_format = "text";
  bool eval_json = false;
  bool eval_timing = true;
  int eval_repeats = 5;
  std::string eval_out = "-";
  eval->add_option("--models", eval_models, "comma list or 'all'");
  eval->add_option("--format", eval_format, "text|csv|json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  eval->add_flag("--json", eval_json, "same as --format json");
  eval->add_option("--timing", eval_timing, "include timing columns in csv");
  eval->add_option("--repeats", eval_repeats, "latency probe repeats")->check(CLI::PositiveNumber);
  eval->add_option("-o,--out", eval_out, "report file ('-' for stdout)");

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "predict RSSI over a lattice");
  FieldFlags heat_field;
  heat_field.add(heat);
  std::string heat_model;
  std::size_t heat_rows = 64;
  std::size_t heat_cols = 64;
  std::optional<std::int64_t> lat_min, lat_max, lon_min, lon_max;
  std::string heat_format = "csv";
  std::string heat_out;
  heat->add_option("--model", heat_model, "model file (omit for the noise-free field)");
  heat->add_option("--rows", heat_rows, "grid rows");
  heat->add_option("--cols", heat_cols, "grid columns");
  heat->add_option("--lat-min", lat_min);
  heat->add_option("--lat-max", lat_max);
  heat->add_option("--lon-min", lon_min);
  heat->add_option("--lon-max", lon_max);
  heat->add_option("--format", heat_format, "csv|pgm")->check(CLI::IsMember({"csv", "pgm"}));
  heat->add_option("-o,--out", heat_out, "grid file")->required();

  // powersim
  auto* power = app.add_subcommand("powersim", "run the transmit-power loop along a walk");
  FieldFlags power_field;
  power_field.add(power);
  ControllerConfig ctl;
  std::string power_model;
  std::size_t power_steps = 200;
  std::string power_out = "-";
  power->add_option("--model", power_model, "use a trained model as the channel");
  power->add_option("--steps", power_steps, "walk length")->check(CLI::PositiveNumber);
  power->add_option("--low", ctl.low_threshold_db, "raise below this RSSI");
  power->add_option("--high", ctl.high_threshold_db, "lower above this RSSI");
  power->add_option("--step", ctl.step_db, "adjustment per step (dB)");
  power->add_option("--tx-min", ctl.tx_min_db);
  power->add_option("--tx-max", ctl.tx_max_db);
  power->add_option("--period-ms", ctl.period_ms);
  power->add_option("--initial-tx", ctl.initial_tx_db);
  power->add_option("--reference-tx", ctl.reference_tx_db, "tx power the channel is measured at");
  power->add_option("-o,--out", power_out, "trace CSV ('-' for stdout)");

  // paper-run
  auto* paper = app.add_subcommand("paper-run", "generate, split, tune, compare, map");
  PaperRunOptions pr;
  FieldFlags paper_field;
  paper_field.add(paper);
  ModelFlags paper_model;
  paper_model.add(paper);
  std::string paper_models = "all";
  std::string paper_out = "paper_run";
  paper->add_option("--samples", pr.sample_count, "samples to synthesize");
  paper->add_option("--train-count", pr.train_count, "training rows");
  paper->add_flag("--use-distance,!--no-distance", pr.use_distance, "include the distance feature");
  paper->add_flag("--reduced", pr.reduced_grids, "smaller grids for quick runs");
  paper->add_option("--val-fraction", pr.val_fraction);
  paper->add_option("--rows", pr.grid_rows, "heatmap rows");
  paper->add_option("--cols", pr.grid_cols, "heatmap columns");
  paper->add_option("--models", paper_models, "comma list or 'all'");
  paper->add_option("-o,--out", paper_out, "output directory");

  try {
    auto args = expand_config(raw_args);
    if (args.empty()) throw CLI::CallForHelp();
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    if (raw_args.empty()) {
      err << app.help();
      return 2;
    }
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (gen->parsed()) {
      auto samples = generate_walk(gen_field.field, gen_count, gen_field.radius, seed);
      if (gen_clean) samples = clean(samples).kept;
      emit(gen_out, out, [&](std::ostream& o) { write_csv(o, samples); });
      write_resolved_beside(gen_out, app, *gen);
    } else if (train->parsed()) {
      if (train_data.data.empty()) throw Error(ErrorKind::config, "train needs --data");
      const auto data = make_dataset(load_csv(train_data.data), train_data.use_distance,
                                     train_data.data);
      const auto model = fit_model(parse_model_kind(train_kind), train_model.apply({}), data, seed);
      save_model(*model, train_out);
      write_resolved_beside(train_out, app, *train);
    } else if (tune->parsed()) {
      if (tune_data.data.empty()) throw Error(ErrorKind::config, "tune needs --data");
      const auto data = make_dataset(load_csv(tune_data.data), tune_data.use_distance,
                                     tune_data.data);
      const auto grid = run_grid(parse_model_kind(tune_kind), tune_grid == "reduced");
      const auto result = grid_search(data, grid, tune_model.apply({}), tune_val, seed);
      emit(tune_out, out, [&](std::ostream& o) { write_trials_csv(o, grid, result); });
      err << "best " << format_point(result.best_params) << " val_mse "
          << text::format_double(result.best_val_mse) << '\n';
      write_resolved_beside(tune_out, app, *tune);
    } else if (eval->parsed()) {
      const auto [tr, te] = load_split(eval_data.data, eval_data.train, eval_data.test,
                                       eval_data.use_distance, eval_data.train_count,
                                       eval_data.train_fraction, seed);
      const auto kinds = parse_kinds(eval_models);
      const auto report = compare_models(tr, te, eval_model.apply({}), seed, kinds, eval_repeats);
      const auto format = eval_json ? std::string("json") : eval_format;
      emit(eval_out, out, [&](std::ostream& o) {
        if (format == "json") {
          o << report.to_json() << '\n';
        } else if (format == "csv") {
          report.write_csv(o, eval_timing);
        } else {
          report.write_text(o);
        }
      });
      write_resolved_beside(eval_out, app, *eval);
    } else if (heat->parsed()) {
      GridBounds b = bounds_around(heat_field.field, heat_field.radius);
      if (lat_min) b.lat_min = *lat_min;
      if (lat_max) b.lat_max = *lat_max;
      if (lon_min) b.lon_min = *lon_min;
      if (lon_max) b.lon_max = *lon_max;
      const auto grid = heat_model.empty()
                            ? field_grid(heat_field.field, b, heat_rows, heat_cols)
                            : predict_grid(*load_model(heat_model), b, heat_rows, heat_cols,
                                           heat_field.field.site());
      export_grid(grid, heat_format == "pgm" ? GridFormat::pgm : GridFormat::csv, heat_out);
      write_resolved_beside(heat_out, app, *heat);
    } else if (power->parsed()) {
      const auto walk = random_walk(power_field.field, power_steps, power_field.radius, seed);
      const auto trace = power_model.empty()
                             ? simulate_loop(power_field.field, walk, ctl, derive_seed(seed, 1))
                             : simulate_loop(*load_model(power_model), walk, ctl,
                                             power_field.field.site());
      emit(power_out, out, [&](std::ostream& o) { write_trace_csv(o, trace); });
      write_resolved_beside(power_out, app, *power);
    } else if (paper->parsed()) {
      pr.seed = seed;
      pr.field = paper_field.field;
      pr.walk_radius_m = paper_field.radius;
      pr.base = paper_model.apply({});
      pr.kinds = parse_kinds(paper_models);
      const auto result = paper_run(pr, paper_out);
      {
        std::ofstream f(std::filesystem::path(paper_out) / "cli.config.txt");
        write_resolved(f, app, *paper);
        if (!f) throw Error(ErrorKind::io, "cannot write cli.config.txt in " + paper_out);
      }
      result.report.write_text(out);
      out << "heatmap overlay vs truth: mae " << text::format_double(result.overlay.mae_db)
          << " dB, mse " << text::format_double(result.overlay.mse_db2) << " dB^2\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rssi::cli
