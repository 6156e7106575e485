#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "hfb/dynamics.hpp"

namespace hfb {

/// Propagator convention, validated against a directly integrated two-node
/// system: dW/dt = kPropagatorPhase * i * w * A(t) * W with A = hfb_generator
/// block, and the generalized density matrix moves as W Gamma(0) W^dagger.
inline constexpr double kPropagatorPhase = -1.0;

/// J = diag(I, -I).
inline Kernel symplectic_form(Eigen::Index n) {
  Kernel j = Kernel::Identity(2 * n, 2 * n);
  j.bottomRightCorner(n, n) *= -1.0;
  return j;
}

inline double symplectic_defect(const Kernel& w) {
  const Kernel j = symplectic_form(w.rows() / 2);
  return max_abs(w * j * w.adjoint() - j);
}

/// exp(kPropagatorPhase * i * t * A_op) for a constant operator-form generator.
inline Kernel constant_propagator(const Kernel& generator_op, double t) {
  const Kernel arg = (kPropagatorPhase * kI * t) * generator_op;
  return arg.exp();
}

struct BogoliubovReport {
  std::vector<double> times;
  std::vector<double> symplectic_defects;
  std::vector<double> reconstruction_defects;
  Kernel final_propagator;

  double max_symplectic_defect() const {
    return symplectic_defects.empty() ? 0.0 : *std::max_element(symplectic_defects.begin(), symplectic_defects.end());
  }
  double max_reconstruction_defect() const {
    return reconstruction_defects.empty() ? 0.0
                                          : *std::max_element(reconstruction_defects.begin(), reconstruction_defects.end());
  }
};

struct BogoliubovOptions {
  /// RK4 substeps per stored interval are chosen so that
  /// substep * ||w A||_inf stays below this value.
  double max_phase_per_substep = 0.02;
  /// Largest N accepted; the propagator is a dense 2N x 2N matrix.
  Eigen::Index max_nodes = 256;
};

/// Integrates the Bogoliubov propagator along a stored trajectory, with the
/// generator interpolated linearly between stamps, and compares
/// W_t Gamma(0) W_t^dagger with the Gamma built from (gamma_t, sigma_t).
inline BogoliubovReport bogoliubov_check(const Trajectory& traj, const HfbModel& m,
                                         const BogoliubovOptions& opt = {}) {
  detail::require(!traj.states.empty(), "bogoliubov_check: empty trajectory");
  const Eigen::Index n = traj.states.front().size();
  detail::require(n <= opt.max_nodes, "bogoliubov_check: restricted to N <= " + std::to_string(opt.max_nodes));
  const double w = m.grid.weight();

  const auto generator_at = [&](std::size_t i) -> Kernel { return w * hfb_generator(traj.states[i], m).block; };
  const Kernel gamma0 = generalized_density_matrix(traj.states.front()).matrix;
  const Kernel j = symplectic_form(n);

  BogoliubovReport report;
  Kernel prop = Kernel::Identity(2 * n, 2 * n);
  const auto record_stamp = [&](std::size_t i) {
    report.times.push_back(traj.times[i]);
    report.symplectic_defects.push_back(max_abs(prop * j * prop.adjoint() - j));
    const Kernel predicted = prop * gamma0 * prop.adjoint();
    report.reconstruction_defects.push_back(max_abs(predicted - generalized_density_matrix(traj.states[i]).matrix));
  };
  record_stamp(0);

  Kernel a_prev = generator_at(0);
  const Complex phase = kPropagatorPhase * kI;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double t0 = traj.times[i - 1];
    const double span = traj.times[i] - t0;
    detail::require(span > 0.0, "bogoliubov_check: times must be strictly increasing");
    const Kernel a_next = generator_at(i);
    const double norm = std::max(a_prev.cwiseAbs().rowwise().sum().maxCoeff(), a_next.cwiseAbs().rowwise().sum().maxCoeff());
    const int sub = std::max(1, static_cast<int>(std::ceil(span * norm / opt.max_phase_per_substep)));
    const double h = span / sub;
    const auto gen = [&](double tau) -> Kernel { return a_prev + (tau / span) * (a_next - a_prev); };
    for (int s = 0; s < sub; ++s) {
      const double tau = s * h;
      const Kernel a0 = gen(tau);
      const Kernel am = gen(tau + 0.5 * h);
      const Kernel a1 = gen(tau + h);
      const Kernel k1 = phase * (a0 * prop);
      const Kernel k2 = phase * (am * (prop + 0.5 * h * k1));
      const Kernel k3 = phase * (am * (prop + 0.5 * h * k2));
      const Kernel k4 = phase * (a1 * (prop + h * k3));
      prop += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    a_prev = a_next;
    record_stamp(i);
  }
  report.final_propagator = std::move(prop);
  return report;
}

}  // namespace hfb
