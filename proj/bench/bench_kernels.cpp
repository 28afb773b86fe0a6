// Serial reference vs OpenMP kernel, same inputs. Run with OMP_NUM_THREADS
// set to the worker count of interest.

#include <benchmark/benchmark.h>

#include "rssi/ensemble.hpp"
#include "rssi/fieldmap.hpp"
#include "rssi/synthfield.hpp"
#include "rssi/tuning.hpp"

namespace {

using namespace rssi;

const Dataset& field_data() {
  static const Dataset d = [] {
    const auto samples = clean(generate_walk(FieldModel{}, 4000, 150.0, 7)).kept;
    return make_dataset(samples, true, "bench");
  }();
  return d;
}

ForestParams forest_params(int trees) {
  ForestParams p;
  p.n_trees = trees;
  return p;
}

const ForestModel& fitted_forest() {
  static const ForestModel f = fit_forest(field_data(), forest_params(100));
  return f;
}

void BM_ForestFitSerial(benchmark::State& st) {
  field_data();
  const auto p = forest_params(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fit_forest_serial(field_data(), p));
}
void BM_ForestFitParallel(benchmark::State& st) {
  const auto p = forest_params(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fit_forest(field_data(), p));
}
BENCHMARK(BM_ForestFitSerial)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestFitParallel)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ForestPredictSerial(benchmark::State& st) {
  fitted_forest();
  for (auto _ : st) benchmark::DoNotOptimize(predict_batch_serial(fitted_forest(), field_data()));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(field_data().size()));
}
void BM_ForestPredictParallel(benchmark::State& st) {
  fitted_forest();
  for (auto _ : st) benchmark::DoNotOptimize(predict_batch(fitted_forest(), field_data()));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(field_data().size()));
}
BENCHMARK(BM_ForestPredictSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestPredictParallel)->Unit(benchmark::kMillisecond);

void BM_OobSerial(benchmark::State& st) {
  fitted_forest();
  for (auto _ : st) benchmark::DoNotOptimize(oob_error_serial(fitted_forest(), field_data()));
}
void BM_OobParallel(benchmark::State& st) {
  fitted_forest();
  for (auto _ : st) benchmark::DoNotOptimize(oob_error(fitted_forest(), field_data()));
}
BENCHMARK(BM_OobSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OobParallel)->Unit(benchmark::kMillisecond);

void BM_GridSerial(benchmark::State& st) {
  fitted_forest();
  const FieldModel field;
  const auto b = bounds_around(field, 150.0);
  for (auto _ : st) benchmark::DoNotOptimize(predict_grid_serial(fitted_forest(), b, 128, 128, field.site()));
}
void BM_GridParallel(benchmark::State& st) {
  fitted_forest();
  const FieldModel field;
  const auto b = bounds_around(field, 150.0);
  for (auto _ : st) benchmark::DoNotOptimize(predict_grid(fitted_forest(), b, 128, 128, field.site()));
}
BENCHMARK(BM_GridSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Unit(benchmark::kMillisecond);

void BM_GridSearchSerial(benchmark::State& st) {
  field_data();
  const HyperGrid g{ModelKind::tree, {{"max_depth", {5, 20}}, {"min_samples_leaf", {2, 10}}}};
  for (auto _ : st) benchmark::DoNotOptimize(grid_search_serial(field_data(), g, {}, 0.25, 1));
}
void BM_GridSearchParallel(benchmark::State& st) {
  const HyperGrid g{ModelKind::tree, {{"max_depth", {5, 20}}, {"min_samples_leaf", {2, 10}}}};
  for (auto _ : st) benchmark::DoNotOptimize(grid_search(field_data(), g, {}, 0.25, 1));
}
BENCHMARK(BM_GridSearchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSearchParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
