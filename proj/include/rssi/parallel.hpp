#pragma once

namespace rssi {

/// Number of OpenMP workers parallel kernels will use (1 without OpenMP).
int worker_count() noexcept;

/// Caps the worker count for subsequent parallel kernels. n <= 0 restores
/// the runtime default.
void set_worker_count(int n) noexcept;

}  // namespace rssi
