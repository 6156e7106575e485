#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "hfb/dynamics.hpp"

namespace hfb {

/// The free semigroup G(t) = exp(-i t A) with
///   A rho = (h phi, [h, gamma], h sigma + sigma h^T + k[sigma]).
///
/// phi and gamma evolve with U = exp(-i t h) from an eigendecomposition of h.
/// The sigma block acts on the N^2-dimensional space; for N <= 64 its Hermitian
/// generator I (x) h + h (x) I + diag(v) is diagonalized once, for larger grids
/// the exponential is applied by a scaled Taylor series.
class LinearFlow {
 public:
  static constexpr Eigen::Index kDenseSigmaLimit = 64;

  explicit LinearFlow(const HfbModel& m) : grid_(m.grid), pair_(m.pair.matrix.cast<Complex>()) {
    const double w = m.grid.weight();
    h_op_ = 0.5 * w * (m.one_body + m.one_body.adjoint());
    Eigen::SelfAdjointEigenSolver<Kernel> eig(h_op_);
    if (eig.info() != Eigen::Success) throw NumericalError("LinearFlow: eigensolver failed");
    h_values_ = eig.eigenvalues();
    h_vectors_ = eig.eigenvectors();

    const Eigen::Index n = m.grid.size();
    if (n <= kDenseSigmaLimit) {
      const Eigen::Index nn = n * n;
      Kernel big = Kernel::Zero(nn, nn);
      const Kernel id = Kernel::Identity(n, n);
      // Column-major vec: vec(h S) = (I (x) h) vec S, vec(S h^T) = (h (x) I) vec S.
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
          big.block(a * n, b * n, n, n) += id(a, b) * h_op_;
          big.block(a * n, b * n, n, n) += h_op_(a, b) * id;
        }
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) big(j * n + i, j * n + i) += pair_(i, j);
      Eigen::SelfAdjointEigenSolver<Kernel> sig(0.5 * (big + big.adjoint()));
      if (sig.info() != Eigen::Success) throw NumericalError("LinearFlow: sigma eigensolver failed");
      sigma_values_ = sig.eigenvalues();
      sigma_vectors_ = sig.eigenvectors();
    }
  }

  Kernel one_body_propagator(double t) const {
    const Eigen::VectorXcd phases = (-kI * t * h_values_.cast<Complex>()).array().exp();
    return h_vectors_ * phases.asDiagonal() * h_vectors_.adjoint();
  }

  /// Dense N^2 x N^2 propagator of the sigma block (only for small grids).
  std::optional<Kernel> sigma_propagator(double t) const {
    if (sigma_vectors_.size() == 0) return std::nullopt;
    const Eigen::VectorXcd phases = (-kI * t * sigma_values_.cast<Complex>()).array().exp();
    return sigma_vectors_ * phases.asDiagonal() * sigma_vectors_.adjoint();
  }

  /// L sigma = h sigma + sigma h^T + v # sigma (operator form of h).
  Kernel sigma_generator(const Kernel& s) const {
    return h_op_ * s + s * h_op_.transpose() + s.cwiseProduct(pair_);
  }

  Kernel apply_sigma_taylor(double t, const Kernel& s) const {
    const double bound = 2.0 * h_op_.cwiseAbs().rowwise().sum().maxCoeff() + pair_.cwiseAbs().maxCoeff();
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(t) * bound / 0.5)));
    const double tau = t / pieces;
    Kernel out = s;
    for (int p = 0; p < pieces; ++p) {
      Kernel term = out;
      Kernel sum = out;
      for (int k = 1; k < 60; ++k) {
        term = (-kI * tau / static_cast<double>(k)) * sigma_generator(term);
        sum += term;
        if (max_abs(term) <= 1e-18 * std::max(1.0, max_abs(sum))) break;
      }
      out = std::move(sum);
    }
    return out;
  }

  const TorusGrid& grid() const { return grid_; }

 private:
  TorusGrid grid_;
  Kernel pair_;
  Kernel h_op_;
  Eigen::VectorXd h_values_;
  Kernel h_vectors_;
  Eigen::VectorXd sigma_values_;
  Kernel sigma_vectors_;
};

/// G(t) precomputed for one fixed t.
class FlowStep {
 public:
  FlowStep(const LinearFlow& flow, double t) : flow_(&flow), t_(t), u_(flow.one_body_propagator(t)) {
    if (auto s = flow.sigma_propagator(t)) s_ = std::move(*s);
  }

  HfbState operator()(const HfbState& in) const {
    HfbState out = in;
    out.phi = u_ * in.phi;
    out.gamma = u_ * in.gamma * u_.adjoint();
    if (s_.size() != 0) {
      const Eigen::Index n = in.size();
      Eigen::Map<const Eigen::VectorXcd> v(in.sigma.data(), n * n);
      const Eigen::VectorXcd r = s_ * v;
      out.sigma = Eigen::Map<const Kernel>(r.data(), n, n);
    } else {
      out.sigma = flow_->apply_sigma_taylor(t_, in.sigma);
    }
    return out;
  }

 private:
  const LinearFlow* flow_;
  double t_;
  Kernel u_;
  Kernel s_;
};

struct MildResult {
  HfbState state;
  /// Ratio of the last two successive-iterate distances above round-off.
  double contraction_factor = 0.0;
  bool contracted = true;
  int iterations = 0;
  /// sup over quadrature nodes of the X^0 distance between iterates k and k+1.
  std::vector<double> increments;
};

namespace detail {

inline HfbState lincomb(std::initializer_list<std::pair<double, const HfbState*>> terms) {
  auto it = terms.begin();
  HfbState out = *it->second;
  out.phi *= it->first;
  out.gamma *= it->first;
  out.sigma *= it->first;
  for (++it; it != terms.end(); ++it) {
    out.phi += it->first * it->second->phi;
    out.gamma += it->first * it->second->gamma;
    out.sigma += it->first * it->second->sigma;
  }
  return out;
}

inline HfbState as_state(const TorusGrid& grid, const Tangent& t) { return {grid, t.dphi, t.dgamma, t.dsigma}; }

}  // namespace detail

/// Picard iteration of the Duhamel formula
///   rho_t = G(t) rho_0 + int_0^t G(t - s) (-i f(rho_s)) ds
/// on a uniform node set s_j = j * delta (delta <= dt, even node count).
/// Even nodes use composite Simpson; odd nodes add a three-point partial
/// interval rule on top of the Simpson sum at the preceding even node.
inline MildResult picard_mild(const HfbState& initial, const HfbModel& m, double t, double dt, int iterations) {
  check_shapes(initial, "picard_mild");
  detail::require(initial.size() <= 256, "picard_mild: restricted to N <= 256 nodes");
  detail::require(iterations >= 1, "picard_mild: need at least one iteration");
  detail::require(t >= 0.0 && dt > 0.0, "picard_mild: need t >= 0 and dt > 0");
  if (t == 0.0) return {initial, 0.0, true, 0, {}};

  int intervals = 2 * static_cast<int>(std::ceil(t / (2.0 * dt) - 1e-9));
  intervals = std::max(intervals, 2);
  const double delta = t / intervals;
  const LinearFlow flow(m);
  const FlowStep forward(flow, delta);
  const FlowStep forward2(flow, 2.0 * delta);
  const FlowStep backward(flow, -delta);

  std::vector<HfbState> free(intervals + 1);
  free[0] = initial;
  for (int j = 1; j <= intervals; ++j) free[j] = forward(free[j - 1]);

  std::vector<HfbState> iterate(intervals + 1, initial);
  MildResult result;
  double previous_increment = -1.0;
  const double noise = 1e-13 * (1.0 + xj_norm(initial, 0).value);

  for (int k = 0; k < iterations; ++k) {
    std::vector<HfbState> g(intervals + 1);
    for (int j = 0; j <= intervals; ++j) g[j] = detail::as_state(initial.grid, rhs_split(iterate[j], m).nonlinear);

    std::vector<HfbState> next(intervals + 1);
    HfbState integral = vacuum_state(initial.grid);
    next[0] = free[0];
    for (int j = 0; j + 2 <= intervals; j += 2) {
      const HfbState g0 = forward(g[j]);
      const HfbState g0_2 = forward2(g[j]);
      const HfbState g1 = forward(g[j + 1]);
      const HfbState g2_back = backward(g[j + 2]);
      const HfbState carried1 = forward(integral);
      const HfbState carried2 = forward2(integral);
      const HfbState odd = detail::lincomb({{1.0, &carried1},
                                            {delta * 5.0 / 12.0, &g0},
                                            {delta * 8.0 / 12.0, &g[j + 1]},
                                            {-delta / 12.0, &g2_back}});
      integral = detail::lincomb(
          {{1.0, &carried2}, {delta / 3.0, &g0_2}, {4.0 * delta / 3.0, &g1}, {delta / 3.0, &g[j + 2]}});
      next[j + 1] = detail::lincomb({{1.0, &free[j + 1]}, {1.0, &odd}});
      next[j + 2] = detail::lincomb({{1.0, &free[j + 2]}, {1.0, &integral}});
    }

    double increment = 0.0;
    for (int j = 0; j <= intervals; ++j) increment = std::max(increment, x_distance(next[j], iterate[j], 0));
    for (const auto& s : next)
      if (!all_finite(s)) throw NumericalError("picard_mild: non-finite iterate");
    iterate = std::move(next);
    result.increments.push_back(increment);
    result.iterations = k + 1;
    if (previous_increment > noise && increment > noise) {
      result.contraction_factor = increment / previous_increment;
      if (result.contraction_factor >= 1.0) result.contracted = false;
    }
    previous_increment = increment;
    if (increment <= noise) break;
  }
  result.state = iterate.back();
  return result;
}

}  // namespace hfb
