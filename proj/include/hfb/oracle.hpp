#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "hfb/state.hpp"

namespace hfb::oracle {

/// Exact flow for v = 0 from an eigendecomposition of h:
///   phi_t = U phi_0,  gamma_t = U gamma_0 U^dagger,  sigma_t = U sigma_0 U^T,
/// with U = exp(-i t h) (operator form w * h_kernel).
inline HfbState free_flow(const HfbState& initial, double t, const Kernel& h_kernel) {
  check_shapes(initial, "free_flow");
  detail::require_square(h_kernel, initial.size(), "free_flow");
  const double scale = std::max(1.0, max_abs(h_kernel));
  if (hermiticity_defect(h_kernel) > 1e-10 * scale) throw InvalidArgument("free_flow: h is not Hermitian");
  const Kernel h_op = 0.5 * initial.grid.weight() * (h_kernel + h_kernel.adjoint());
  Eigen::SelfAdjointEigenSolver<Kernel> eig(h_op);
  if (eig.info() != Eigen::Success) throw NumericalError("free_flow: eigensolver failed");
  const Eigen::VectorXcd phases = (-kI * t * eig.eigenvalues().cast<Complex>()).array().exp();
  const Kernel u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  HfbState out = initial;
  out.phi = u * initial.phi;
  out.gamma = u * initial.gamma * u.adjoint();
  out.sigma = u * initial.sigma * u.transpose();
  return out;
}

struct OrderEstimate {
  std::vector<double> dts;
  std::vector<double> errors;
  double order = 0.0;
  /// False when the errors do not decrease strictly along the dt sequence.
  bool monotone = true;
};

/// Least-squares slope of log(error) against log(dt).
inline double fitted_order(const std::vector<double>& dts, const std::vector<double>& errors) {
  const std::size_t k = dts.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(dts[i]);
    my += std::log(errors[i]);
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(dts[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Convergence order of a fixed-step scheme.
///
/// `solve(dt)` returns the final state for step dt. Errors are X^0 distances
/// to `reference` when given, otherwise to a self-convergence reference solved
/// at a quarter of the finest dt. dts must be a halving sequence of length >= 3.
inline OrderEstimate order_study(const std::function<HfbState(double)>& solve, std::vector<double> dts,
                                 const std::optional<HfbState>& reference = std::nullopt) {
  detail::require(dts.size() >= 3, "order_study: need at least three dt values");
  std::sort(dts.begin(), dts.end(), std::greater<>());
  for (std::size_t i = 1; i < dts.size(); ++i)
    detail::require(std::abs(dts[i - 1] / dts[i] - 2.0) < 1e-9, "order_study: dt values must halve successively");
  const HfbState ref = reference ? *reference : solve(dts.back() / 4.0);
  OrderEstimate est;
  est.dts = dts;
  for (double dt : dts) est.errors.push_back(x_distance(solve(dt), ref, 0));
  for (std::size_t i = 1; i < est.errors.size(); ++i)
    if (!(est.errors[i] < est.errors[i - 1])) est.monotone = false;
  est.order = fitted_order(est.dts, est.errors);
  return est;
}

}  // namespace hfb::oracle
