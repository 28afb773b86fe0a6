#include "rssi/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "rssi/error.hpp"
#include "text.hpp"

namespace rssi {

double latency_probe(const Regressor& model, const Dataset& samples, int repeats) {
  if (samples.empty()) throw Error(ErrorKind::predict, "latency probe needs samples");
  repeats = std::max(1, repeats);
  std::vector<double> per_sample;
  per_sample.reserve(static_cast<std::size_t>(repeats));
  volatile double sink = 0.0;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) acc += model.predict(samples.row(i));
    const auto t1 = std::chrono::steady_clock::now();
    sink = sink + acc;
    const double micros = std::chrono::duration<double, std::micro>(t1 - t0).count();
    per_sample.push_back(micros / static_cast<double>(samples.size()));
  }
  std::sort(per_sample.begin(), per_sample.end());
  const std::size_t m = per_sample.size();
  return m % 2 ? per_sample[m / 2] : 0.5 * (per_sample[m / 2 - 1] + per_sample[m / 2]);
}

EvaluationReport compare_models(const Dataset& train, const Dataset& test,
                                const ModelConfigs& configs, Seed seed,
                                std::span<const ModelKind> kinds, int latency_repeats,
                                std::vector<std::unique_ptr<Regressor>>* fitted) {
  EvaluationReport report;
  report.dataset = train.provenance();
  report.seed = seed;
  report.train_size = train.size();
  report.test_size = test.size();
  for (const auto kind : kinds) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      auto model = fit_model(kind, configs, train, seed);
      const auto t1 = std::chrono::steady_clock::now();
      const auto metrics = score(test.targets(), predict_all(*model, test));
      report.rows.push_back({kind, metrics.mae_db, metrics.mse_db2,
                             std::chrono::duration<double>(t1 - t0).count(),
                             latency_probe(*model, test, latency_repeats)});
      if (fitted) fitted->push_back(std::move(model));
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(to_string(kind)) + ": " + e.what());
    }
  }
  return report;
}

void EvaluationReport::write_text(std::ostream& out) const {
  char line[160];
  std::snprintf(line, sizeof line, "%-26s %10s %12s %10s %14s\n", "Model", "MAE (dB)",
                "MSE (dB^2)", "Fit (s)", "Predict (us)");
  out << "dataset: " << (dataset.empty() ? "-" : dataset) << "  seed: " << seed
      << "  train: " << train_size << "  test: " << test_size << '\n'
      << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-26s %10.4f %12.4f %10.3f %14.3f\n",
                  std::string(display_name(r.kind)).c_str(), r.test_mae_db, r.test_mse_db2,
                  r.fit_seconds, r.predict_micros_per_sample);
    out << line;
  }
}

void EvaluationReport::write_csv(std::ostream& out, bool include_timing) const {
  out << "model,test_mae_db,test_mse_db2";
  if (include_timing) out << ",fit_seconds,predict_micros_per_sample";
  out << '\n';
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << text::format_double(r.test_mae_db) << ','
        << text::format_double(r.test_mse_db2);
    if (include_timing) {
      out << ',' << text::format_double(r.fit_seconds) << ','
          << text::format_double(r.predict_micros_per_sample);
    }
    out << '\n';
  }
}

std::string EvaluationReport::to_json() const {
  nlohmann::ordered_json j;
  j["dataset"] = dataset;
  j["seed"] = seed;
  j["train_size"] = train_size;
  j["test_size"] = test_size;
  auto& arr = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"model", to_string(r.kind)},
                   {"name", display_name(r.kind)},
                   {"test_mae_db", r.test_mae_db},
                   {"test_mse_db2", r.test_mse_db2},
                   {"fit_seconds", r.fit_seconds},
                   {"predict_micros_per_sample", r.predict_micros_per_sample}});
  }
  return j.dump(2);
}

}  // namespace rssi
