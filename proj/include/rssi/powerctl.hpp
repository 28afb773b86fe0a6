#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rssi/random.hpp"
#include "rssi/regressor.hpp"
#include "rssi/synthfield.hpp"

namespace rssi {

struct ControllerConfig {
  double low_threshold_db = -60.0;
  double high_threshold_db = -40.0;
  double step_db = 1.0;
  double tx_min_db = -10.0;
  double tx_max_db = 30.0;
  std::int64_t period_ms = 100;
  // tx power the base channel values are referenced to, and where the loop starts
  double reference_tx_db = 0.0;
  double initial_tx_db = 0.0;

  void validate() const;
};

enum class Action { raise, lower, hold };

std::string_view to_string(Action a);

struct StepResult {
  Action action = Action::hold;
  double tx_db = 0.0;
};

StepResult control_step(const ControllerConfig& config, double measured_rssi_db,
                        double current_tx_db);

struct TraceStep {
  std::int64_t t_ms = 0;
  double rx_rssi_db = 0.0;
  Action action = Action::hold;
  double tx_power_db = 0.0;  // after this step's action
};

struct PowerControlTrace {
  std::vector<TraceStep> steps;
};

/// Channel is the field plus fresh shadowing per position, drawn from `seed`.
PowerControlTrace simulate_loop(const FieldModel& field, std::span<const WalkPoint> walk,
                                const ControllerConfig& config, Seed seed);

/// Channel is a trained predictor. `tx` is needed for 3-feature models.
PowerControlTrace simulate_loop(const Regressor& model, std::span<const WalkPoint> walk,
                                const ControllerConfig& config,
                                const std::optional<TxSite>& tx);

/// Loop against a fixed list of base RSSI values (no movement model).
PowerControlTrace simulate_static(std::span<const double> base_rssi_db,
                                  const ControllerConfig& config);

void write_trace_csv(std::ostream& out, const PowerControlTrace& trace);
void save_trace_csv(const std::filesystem::path& path, const PowerControlTrace& trace);

}  // namespace rssi
