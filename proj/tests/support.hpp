#pragma once

// Reference implementations and fixtures shared by the unit and acceptance
// tests. Everything here is written independently of the library code it
// checks: plain loops, no shared helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rssi/dataset.hpp"
#include "rssi/svr.hpp"
#include "rssi/synthfield.hpp"

namespace oracle {

inline double naive_mae(const std::vector<double>& a, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - p[i]);
  return s / static_cast<double>(a.size());
}

inline double naive_mse(const std::vector<double>& a, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - p[i]) * (a[i] - p[i]);
  return s / static_cast<double>(a.size());
}

inline double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::fabs(got - want) / std::max(std::fabs(want), std::numeric_limits<double>::min());
}

// Population standard deviation by the two-pass textbook formula.
inline double pop_sd(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

inline double mean(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

// Random dataset with features in [0, 1) and a smooth nonlinear target.
inline rssi::Dataset random_dataset(std::size_t n, std::size_t dim, std::uint64_t seed,
                                    double noise = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, noise);
  std::vector<double> x(n * dim);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = 0.0;
    for (std::size_t f = 0; f < dim; ++f) {
      x[i * dim + f] = u(rng);
      t += std::sin(3.0 * x[i * dim + f] * static_cast<double>(f + 1));
    }
    y[i] = t + g(rng);
  }
  return rssi::Dataset(dim, std::move(x), std::move(y), "random");
}

// Synthetic field split the way the experiments use it.
inline std::pair<rssi::Dataset, rssi::Dataset> field_split(std::uint64_t seed, std::size_t count,
                                                           std::size_t train, double sigma = 4.0,
                                                           bool use_distance = true) {
  rssi::FieldModel field;
  field.shadow_sigma_db = sigma;
  const auto samples = rssi::clean(rssi::generate_walk(field, count, 150.0, seed)).kept;
  const auto data = rssi::make_dataset(samples, use_distance, "field");
  return rssi::split(data, train, rssi::derive_seed(seed, 2));
}

// ---- SVR KKT checker -------------------------------------------------------

inline double kernel(const rssi::Kernel& k, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  if (k.type == rssi::KernelType::linear) {
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-k.gamma * s);
}

struct KktReport {
  double box = 0.0;       // worst |beta| - C excess
  double equality = 0.0;  // |sum beta|
  double tube = 0.0;      // worst complementarity violation
  bool ok(double tol) const { return box <= tol && equality <= tol && tube <= tol; }
};

// Rebuilds the full dual vector from the model and checks the e-SVR
// optimality conditions point by point, with f recomputed from scratch.
inline KktReport check_kkt(const rssi::Dataset& train, const rssi::SvrModel& model, double c,
                           double epsilon) {
  const std::size_t n = train.size();
  std::vector<double> beta(n, 0.0);
  for (std::size_t s = 0; s < model.support_count(); ++s) {
    beta[model.support_indices()[s]] = model.dual_coefs()[s];
  }
  KktReport r;
  double sum = 0.0;
  for (double b : beta) {
    sum += b;
    r.box = std::max(r.box, std::fabs(b) - c);
  }
  r.equality = std::fabs(sum);
  const double at_bound = 1e-9 * c;
  for (std::size_t i = 0; i < n; ++i) {
    double f = model.bias();
    for (std::size_t j = 0; j < n; ++j) {
      if (beta[j] != 0.0) f += beta[j] * kernel(model.kernel(), train.row(j), train.row(i));
    }
    const double res = train.target(i) - f;
    const double b = beta[i];
    double v = 0.0;
    if (b == 0.0) {
      v = std::fabs(res) - epsilon;  // inside the tube
    } else if (b >= c - at_bound) {
      v = epsilon - res;  // at upper bound: residual >= eps
    } else if (b <= -c + at_bound) {
      v = res + epsilon;  // at lower bound: residual <= -eps
    } else if (b > 0.0) {
      v = std::fabs(res - epsilon);
    } else {
      v = std::fabs(res + epsilon);
    }
    r.tube = std::max(r.tube, v);
  }
  return r;
}

inline double eps_loss(const rssi::Dataset& d, const rssi::Regressor& m, double epsilon) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    s += std::max(0.0, std::fabs(d.target(i) - m.predict(d.row(i))) - epsilon);
  }
  return s;
}

// ---- depth-2 tree enumeration ---------------------------------------------

struct Stump {
  bool split = false;
  double threshold = 0.0;
  double sse = 0.0;
};

inline double sse_of(const std::vector<double>& y) {
  const double m = mean(y);
  double s = 0.0;
  for (double v : y) s += (v - m) * (v - m);
  return s;
}

inline std::vector<double> midpoints(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> out;
  for (std::size_t i = 1; i < xs.size(); ++i) out.push_back(0.5 * (xs[i - 1] + xs[i]));
  return out;
}

// SDR of a threshold computed directly from the partition.
inline double direct_sdr(const std::vector<double>& x, const std::vector<double>& y, double t) {
  std::vector<double> l, r;
  for (std::size_t i = 0; i < x.size(); ++i) (x[i] <= t ? l : r).push_back(y[i]);
  if (l.empty() || r.empty()) return -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(y.size());
  return pop_sd(y) - static_cast<double>(l.size()) / n * pop_sd(l) -
         static_cast<double>(r.size()) / n * pop_sd(r);
}

// Best threshold by SDR, scanning every candidate; earliest wins ties.
inline std::pair<bool, double> best_sdr_threshold(const std::vector<double>& x,
                                                  const std::vector<double>& y) {
  double best = 0.0;
  bool found = false;
  double thr = 0.0;
  for (double t : midpoints(x)) {
    const double s = direct_sdr(x, y, t);
    if (s > best) {
      best = s;
      thr = t;
      found = true;
    }
  }
  return {found, thr};
}

// Training SSE of the depth <= 2 tree picked by greedy SDR, 1 feature,
// no size limits.
inline double greedy_depth2_sse(const std::vector<double>& x, const std::vector<double>& y) {
  const auto [root_ok, t] = best_sdr_threshold(x, y);
  if (!root_ok) return sse_of(y);
  double total = 0.0;
  for (int side = 0; side < 2; ++side) {
    std::vector<double> cx, cy;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if ((x[i] <= t) == (side == 0)) {
        cx.push_back(x[i]);
        cy.push_back(y[i]);
      }
    }
    const auto [ok, ct] = best_sdr_threshold(cx, cy);
    if (!ok) {
      total += sse_of(cy);
      continue;
    }
    std::vector<double> a, b;
    for (std::size_t i = 0; i < cx.size(); ++i) (cx[i] <= ct ? a : b).push_back(cy[i]);
    total += sse_of(a) + sse_of(b);
  }
  return total;
}

// Smallest training SSE over every axis-aligned tree of depth <= 2 on one
// feature (exhaustive, no greediness).
inline double optimal_depth2_sse(const std::vector<double>& x, const std::vector<double>& y) {
  auto best_stump_sse = [](const std::vector<double>& cx, const std::vector<double>& cy) {
    double best = sse_of(cy);
    for (double t : midpoints(cx)) {
      std::vector<double> a, b;
      for (std::size_t i = 0; i < cx.size(); ++i) (cx[i] <= t ? a : b).push_back(cy[i]);
      best = std::min(best, sse_of(a) + sse_of(b));
    }
    return best;
  };
  double best = sse_of(y);
  for (double t : midpoints(x)) {
    std::vector<double> lx, ly, rx, ry;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] <= t) {
        lx.push_back(x[i]);
        ly.push_back(y[i]);
      } else {
        rx.push_back(x[i]);
        ry.push_back(y[i]);
      }
    }
    best = std::min(best, best_stump_sse(lx, ly) + best_stump_sse(rx, ry));
  }
  return best;
}

}  // namespace oracle
