#include "rssi/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <ostream>

#include "model_io.hpp"
#include "rssi/error.hpp"

namespace rssi {

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const noexcept {
  if (type == KernelType::linear) {
    double dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
    return dot;
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

void SvrParams::validate() const {
  if (!(c > 0.0)) throw Error(ErrorKind::config, "svr C must be > 0");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::config, "svr epsilon must be >= 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::config, "svr tol must be > 0");
  if (max_passes <= 0) throw Error(ErrorKind::config, "svr max_passes must be > 0");
  if (kernel.type == KernelType::rbf && kernel.gamma < 0.0) {
    throw Error(ErrorKind::config, "svr gamma must be > 0");
  }
}

SvrModel::SvrModel(std::size_t dim, Kernel kernel, std::vector<double> support_vectors,
                   std::vector<double> dual_coefs, double bias, bool converged)
    : dim_(dim),
      kernel_(kernel),
      support_vectors_(std::move(support_vectors)),
      dual_coefs_(std::move(dual_coefs)),
      bias_(bias),
      converged_(converged) {
  if (support_vectors_.size() != dim_ * dual_coefs_.size()) {
    throw Error(ErrorKind::fit, "support vector matrix does not match coefficient count");
  }
}

double SvrModel::predict(std::span<const double> x) const {
  check_dim(x);
  double acc = bias_;
  for (std::size_t i = 0; i < dual_coefs_.size(); ++i) {
    acc += dual_coefs_[i] * kernel_(support_vector(i), x);
  }
  return acc;
}

void SvrModel::write(std::ostream& out) const {
  if (kernel_.type == KernelType::linear) {
    out << "kernel linear\n";
  } else {
    out << "kernel rbf " << text::format_double(kernel_.gamma) << '\n';
  }
  out << "dim " << dim_ << "\nbias " << text::format_double(bias_) << "\nconverged "
      << (converged_ ? 1 : 0) << "\nsupport " << dual_coefs_.size() << '\n';
  for (std::size_t i = 0; i < dual_coefs_.size(); ++i) {
    out << "sv " << text::format_double(dual_coefs_[i]);
    for (double v : support_vector(i)) out << ' ' << text::format_double(v);
    out << '\n';
  }
}

SvrModel SvrModel::read(io::LineReader& in) {
  const auto kernel_tokens = in.expect("kernel", 1);
  Kernel kernel;
  if (kernel_tokens[0] == "linear") {
    kernel.type = KernelType::linear;
  } else if (kernel_tokens[0] == "rbf" && kernel_tokens.size() == 2) {
    kernel.gamma = in.to_double(kernel_tokens[1]);
  } else {
    in.fail("unknown kernel spec");
  }
  const auto dim = static_cast<std::size_t>(in.integer("dim"));
  const double bias = in.number("bias");
  const bool converged = in.integer("converged") != 0;
  const auto count = static_cast<std::size_t>(in.integer("support"));
  std::vector<double> svs;
  std::vector<double> coefs;
  for (std::size_t i = 0; i < count; ++i) {
    const auto tok = in.expect("sv", dim + 1);
    coefs.push_back(in.to_double(tok[0]));
    for (std::size_t k = 0; k < dim; ++k) svs.push_back(in.to_double(tok[k + 1]));
  }
  return SvrModel(dim, kernel, std::move(svs), std::move(coefs), bias, converged);
}

namespace {

/// LRU cache of kernel matrix rows, computed on demand.
class KernelRows {
 public:
  KernelRows(const Dataset& data, Kernel kernel, std::size_t budget_bytes)
      : data_(data), kernel_(kernel), rows_(data.size()), where_(data.size()) {
    const std::size_t row_bytes = std::max<std::size_t>(1, data.size() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
  }

  const std::vector<double>& row(std::size_t i) {
    if (!rows_[i].empty()) {
      lru_.splice(lru_.begin(), lru_, where_[i]);
      return rows_[i];
    }
    if (lru_.size() >= capacity_) {
      const std::size_t victim = lru_.back();
      lru_.pop_back();
      std::vector<double>().swap(rows_[victim]);
    }
    auto& r = rows_[i];
    r.resize(data_.size());
    const auto xi = data_.row(i);
    for (std::size_t k = 0; k < data_.size(); ++k) r[k] = kernel_(xi, data_.row(k));
    lru_.push_front(i);
    where_[i] = lru_.begin();
    return r;
  }

 private:
  const Dataset& data_;
  Kernel kernel_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::list<std::size_t>::iterator> where_;
  std::list<std::size_t> lru_;
  std::size_t capacity_ = 2;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SvrModel fit_svr(const Dataset& train, const SvrParams& params, Seed seed) {
  params.validate();
  if (train.empty()) throw Error(ErrorKind::fit, "svr on empty dataset");
  if (train.size() < 2) throw Error(ErrorKind::fit, "svr needs at least 2 samples");

  Kernel kernel = params.kernel;
  if (kernel.type == KernelType::rbf && kernel.gamma == 0.0) {
    kernel.gamma = 1.0 / static_cast<double>(train.dim());
  }

  const std::size_t n = train.size();
  const double c = params.c;
  const double eps = params.epsilon;

  // beta_i in [-C, C], sum(beta) = 0. grad_i = y_i - (K beta)_i.
  std::vector<double> beta(n, 0.0);
  std::vector<double> grad(train.targets().begin(), train.targets().end());
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = kernel(train.row(i), train.row(i));

  // Lower/upper bound each point places on the bias; the solution is optimal
  // when max(lower) <= min(upper).
  auto lower = [&](std::size_t i) {
    if (beta[i] >= c) return -kInf;
    return grad[i] - (beta[i] >= 0.0 ? eps : -eps);
  };
  auto upper = [&](std::size_t i) {
    if (beta[i] <= -c) return kInf;
    return grad[i] - (beta[i] > 0.0 ? eps : -eps);
  };

  // The seeded scan order decides which of several equally violating points
  // is picked first.
  const auto order = split_permutation(n, seed);
  KernelRows rows(train, kernel, params.cache_mb * 1024 * 1024);

  const std::size_t max_iter = static_cast<std::size_t>(params.max_passes) * n;
  std::size_t iter = 0;
  bool converged = false;
  double violation = 0.0;

  for (;; ++iter) {
    // i: largest lower bound. Stop when no upper bound sits below it by tol.
    std::size_t i = n;
    double best_low = -kInf;
    double min_up = kInf;
    for (const std::size_t k : order) {
      const double lo = lower(k);
      if (lo > best_low) {
        best_low = lo;
        i = k;
      }
      min_up = std::min(min_up, upper(k));
    }
    violation = i == n ? 0.0 : best_low - min_up;
    if (violation < params.tol) {
      converged = true;
      break;
    }
    if (iter >= max_iter) break;

    // j: among points violating with i, the one with the largest
    // second-order decrease gap^2 / curvature.
    const auto& ki = rows.row(i);
    std::size_t j = n;
    double best_gain = -kInf;
    for (const std::size_t k : order) {
      const double gap = best_low - upper(k);
      if (!(gap > 0.0)) continue;
      double curv = diag[i] + diag[k] - 2.0 * ki[k];
      if (curv <= 0.0) curv = 1e-12;
      const double gain = gap * gap / curv;
      if (gain > best_gain) {
        best_gain = gain;
        j = k;
      }
    }
    if (j == n) break;
    const auto& kj = rows.row(j);
    const double eta = diag[i] + diag[j] - 2.0 * ki[j];
    const double g = grad[j] - grad[i];

    // Minimize phi(t) = eta/2 t^2 + g t + eps (|beta_i + t| + |beta_j - t|)
    // over t in [0, hi]. phi' is piecewise linear and non-decreasing, so walk
    // the segments between kinks until it turns non-negative.
    const double hi = std::min(c - beta[i], beta[j] + c);
    double kinks[3];
    int nk = 0;
    if (-beta[i] > 0.0 && -beta[i] < hi) kinks[nk++] = -beta[i];
    if (beta[j] > 0.0 && beta[j] < hi) kinks[nk++] = beta[j];
    std::sort(kinks, kinks + nk);
    kinks[nk++] = hi;

    double t = 0.0;
    double seg_start = 0.0;
    for (int s = 0; s < nk; ++s) {
      const double seg_end = kinks[s];
      const double mid = 0.5 * (seg_start + seg_end);
      const double si = beta[i] + mid >= 0.0 ? 1.0 : -1.0;
      const double sj = beta[j] - mid > 0.0 ? 1.0 : -1.0;
      const double lin = g + eps * (si - sj);
      if (eta * seg_start + lin >= 0.0) {
        t = seg_start;
        break;
      }
      if (eta > 0.0) {
        const double root = -lin / eta;
        if (root < seg_end) {
          t = root;
          break;
        }
      }
      t = seg_end;
      seg_start = seg_end;
    }
    if (!(t > 0.0)) break;  // numerical stall

    beta[i] += t;
    beta[j] -= t;
    for (std::size_t idx : {i, j}) {
      if (std::abs(beta[idx] - c) <= 1e-12 * c) beta[idx] = c;
      if (std::abs(beta[idx] + c) <= 1e-12 * c) beta[idx] = -c;
      if (std::abs(beta[idx]) <= 1e-15 * c) beta[idx] = 0.0;
    }
    for (std::size_t k = 0; k < n; ++k) grad[k] -= t * (ki[k] - kj[k]);
  }

  // Bias: average over free support vectors, else the centre of the
  // feasible interval.
  double bias_sum = 0.0;
  std::size_t free_count = 0;
  double max_low = -kInf;
  double min_up = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    max_low = std::max(max_low, lower(k));
    min_up = std::min(min_up, upper(k));
    if (beta[k] != 0.0 && std::abs(beta[k]) < c) {
      bias_sum += grad[k] - (beta[k] > 0.0 ? eps : -eps);
      ++free_count;
    }
  }
  double bias;
  if (free_count > 0) {
    bias = bias_sum / static_cast<double>(free_count);
  } else if (std::isfinite(max_low) && std::isfinite(min_up)) {
    bias = 0.5 * (max_low + min_up);
  } else {
    bias = std::isfinite(max_low) ? max_low : min_up;
  }

  std::vector<double> svs;
  std::vector<double> coefs;
  std::vector<std::size_t> indices;
  for (std::size_t k = 0; k < n; ++k) {
    if (beta[k] == 0.0) continue;
    const auto r = train.row(k);
    svs.insert(svs.end(), r.begin(), r.end());
    coefs.push_back(beta[k]);
    indices.push_back(k);
  }
  SvrModel model(train.dim(), kernel, std::move(svs), std::move(coefs), bias, converged);
  model.support_indices_ = std::move(indices);
  model.final_violation_ = violation;
  model.iterations_ = iter;
  return model;
}

}  // namespace rssi
