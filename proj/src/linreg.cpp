#include "rssi/linreg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>

#include "model_io.hpp"
#include "rssi/error.hpp"

namespace rssi {

void Regressor::check_dim(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw Error(ErrorKind::predict, std::string(kind()) + " model expects " +
                                        std::to_string(dim()) + " features, got " +
                                        std::to_string(x.size()));
  }
}

std::vector<double> predict_all(const Regressor& model, const Dataset& data) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = model.predict(data.row(i));
  return out;
}

LinearModel::LinearModel(std::vector<double> theta, double theta0)
    : theta_(std::move(theta)), theta0_(theta0) {
  for (double t : theta_) {
    if (!std::isfinite(t)) throw Error(ErrorKind::fit, "non-finite linear coefficient");
  }
  if (!std::isfinite(theta0_)) throw Error(ErrorKind::fit, "non-finite intercept");
}

double LinearModel::predict(std::span<const double> x) const {
  check_dim(x);
  double acc = theta0_;
  for (std::size_t i = 0; i < theta_.size(); ++i) acc += theta_[i] * x[i];
  return acc;
}

void LinearModel::write(std::ostream& out) const {
  out << "theta";
  for (double t : theta_) out << ' ' << text::format_double(t);
  out << "\ntheta0 " << text::format_double(theta0_) << '\n';
}

LinearModel LinearModel::read(io::LineReader& in) {
  std::vector<double> theta;
  for (const auto& tok : in.expect("theta")) theta.push_back(in.to_double(tok));
  const double theta0 = in.number("theta0");
  return LinearModel(std::move(theta), theta0);
}

LinearModel fit_linear(const Dataset& train) {
  if (train.empty()) throw Error(ErrorKind::fit, "linear regression on empty dataset");
  const auto n = static_cast<Eigen::Index>(train.size());
  const auto d = static_cast<Eigen::Index>(train.dim());

  Eigen::MatrixXd a(n, d + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = train.row(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
    a(i, d) = 1.0;
    y(i) = train.target(static_cast<std::size_t>(i));
  }

  // Pseudo-inverse of the Gram matrix through its eigendecomposition; small
  // eigenvalues are treated as exact zeros, which yields the minimum-norm
  // least-squares solution.
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = lambda.cwiseAbs().maxCoeff() * 1e-12 * static_cast<double>(d + 1);
  Eigen::VectorXd inv(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    inv(i) = lambda(i) > cutoff ? 1.0 / lambda(i) : 0.0;
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  auto solve = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
    return v * inv.asDiagonal() * (v.transpose() * rhs);
  };

  Eigen::VectorXd beta = solve(a.transpose() * y);
  // One step of iterative refinement tightens the normal-equation residual.
  beta += solve(a.transpose() * (y - a * beta));

  std::vector<double> theta(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) theta[static_cast<std::size_t>(j)] = beta(j);
  return LinearModel(std::move(theta), beta(d));
}

}  // namespace rssi
