#include "rssi/error.hpp"
#include "rssi/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rssi {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_coordinate: return "invalid-coordinate";
    case ErrorKind::parse: return "parse";
    case ErrorKind::split: return "split";
    case ErrorKind::metric: return "metric";
    case ErrorKind::fit: return "fit";
    case ErrorKind::predict: return "predict";
    case ErrorKind::oob_unavailable: return "oob-unavailable";
    case ErrorKind::grid: return "grid";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

namespace {
int g_default_workers = 0;
}

int worker_count() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_worker_count(int n) noexcept {
#ifdef _OPENMP
  if (g_default_workers == 0) g_default_workers = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : g_default_workers);
#else
  (void)n;
#endif
}

}  // namespace rssi
