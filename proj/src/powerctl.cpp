#include "rssi/powerctl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "rssi/dataset.hpp"
#include "rssi/error.hpp"
#include "text.hpp"

namespace rssi {

void ControllerConfig::validate() const {
  auto bad = [](const char* msg) { throw Error(ErrorKind::config, msg); };
  if (!std::isfinite(low_threshold_db) || !std::isfinite(high_threshold_db) ||
      !(low_threshold_db < high_threshold_db)) {
    bad("controller: low threshold must be below high threshold");
  }
  if (!(step_db > 0.0) || !std::isfinite(step_db)) bad("controller: step must be positive");
  if (!std::isfinite(tx_min_db) || !std::isfinite(tx_max_db) || !(tx_min_db < tx_max_db)) {
    bad("controller: tx_min must be below tx_max");
  }
  if (period_ms <= 0) bad("controller: period must be positive");
  if (!std::isfinite(reference_tx_db)) bad("controller: reference tx must be finite");
  if (!(initial_tx_db >= tx_min_db && initial_tx_db <= tx_max_db)) {
    bad("controller: initial tx outside actuator bounds");
  }
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::raise: return "raise";
    case Action::lower: return "lower";
    case Action::hold: return "hold";
  }
  return "hold";
}

StepResult control_step(const ControllerConfig& config, double measured_rssi_db,
                        double current_tx_db) {
  if (measured_rssi_db < config.low_threshold_db) {
    return {Action::raise, std::min(current_tx_db + config.step_db, config.tx_max_db)};
  }
  if (measured_rssi_db > config.high_threshold_db) {
    return {Action::lower, std::max(current_tx_db - config.step_db, config.tx_min_db)};
  }
  return {Action::hold, current_tx_db};
}

namespace {

template <typename BaseAt>
PowerControlTrace run_loop(std::size_t n, const ControllerConfig& config, BaseAt base_at) {
  config.validate();
  if (n == 0) throw Error(ErrorKind::config, "power control walk is empty");
  PowerControlTrace trace;
  trace.steps.reserve(n);
  double tx = config.initial_tx_db;
  for (std::size_t i = 0; i < n; ++i) {
    const double rx = base_at(i) + (tx - config.reference_tx_db);
    const auto step = control_step(config, rx, tx);
    tx = step.tx_db;
    trace.steps.push_back({static_cast<std::int64_t>(i) * config.period_ms, rx, step.action, tx});
  }
  return trace;
}

}  // namespace

PowerControlTrace simulate_loop(const FieldModel& field, std::span<const WalkPoint> walk,
                                const ControllerConfig& config, Seed seed) {
  field.validate();
  Rng rng(seed);
  return run_loop(walk.size(), config, [&](std::size_t i) {
    return eval_field(field, walk[i].lat_e6, walk[i].lon_e6, rng);
  });
}

PowerControlTrace simulate_loop(const Regressor& model, std::span<const WalkPoint> walk,
                                const ControllerConfig& config,
                                const std::optional<TxSite>& tx) {
  const bool use_distance = model.dim() == 3;
  return run_loop(walk.size(), config, [&](std::size_t i) {
    return model.predict(featurize_point(walk[i].lat_e6, walk[i].lon_e6, use_distance, tx));
  });
}

PowerControlTrace simulate_static(std::span<const double> base_rssi_db,
                                  const ControllerConfig& config) {
  return run_loop(base_rssi_db.size(), config, [&](std::size_t i) { return base_rssi_db[i]; });
}

void write_trace_csv(std::ostream& out, const PowerControlTrace& trace) {
  out << "t_ms,rssi_db,action,tx_db\n";
  for (const auto& s : trace.steps) {
    out << s.t_ms << ',' << text::format_double(s.rx_rssi_db) << ',' << to_string(s.action) << ','
        << text::format_double(s.tx_power_db) << '\n';
  }
}

void save_trace_csv(const std::filesystem::path& path, const PowerControlTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  write_trace_csv(out, trace);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace rssi
