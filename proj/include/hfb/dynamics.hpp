#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hfb/meanfield.hpp"

namespace hfb {

/// Time derivative (d phi/dt, d gamma/dt, d sigma/dt).
struct Tangent {
  ComplexField dphi;
  Kernel dgamma;
  Kernel dsigma;

  Tangent& operator+=(const Tangent& o) {
    dphi += o.dphi;
    dgamma += o.dgamma;
    dsigma += o.dsigma;
    return *this;
  }
  friend Tangent operator+(Tangent a, const Tangent& b) { return a += b; }
};

/// Max-entry distance between two tangents.
inline double max_entry_difference(const Tangent& a, const Tangent& b) {
  double d = 0.0;
  if (a.dphi.size()) d = std::max(d, (a.dphi - b.dphi).cwiseAbs().maxCoeff());
  if (a.dgamma.size()) d = std::max(d, max_abs(a.dgamma - b.dgamma));
  if (a.dsigma.size()) d = std::max(d, max_abs(a.dsigma - b.dsigma));
  return d;
}

/// Full HFB right-hand side:
///   i dphi   = h(gamma) phi + k(sigma^phi) conj(phi)
///   i dgamma = [h(gamma^phi), gamma] + k(sigma^phi) sigma^* - sigma k(sigma^phi)^*
///   i dsigma = [h(gamma^phi), sigma]_+ + [k(sigma^phi), gamma]_+ + k(sigma^phi)
/// with [A, B]_+ = A B^T + B A^T. Operator products of kernels carry a factor w.
inline Tangent rhs(const HfbState& s, const HfbModel& m) {
  check_shapes(s, "rhs");
  detail::require(s.grid == m.grid, "rhs: state and model live on different grids");
  const double w = s.grid.weight();
  const Kernel h_gamma = mean_field_h(m, s.gamma);
  const Kernel h_full = mean_field_h(m, gamma_phi(s));
  const Kernel k_full = pairing_k(m.pair, sigma_phi(s));

  Tangent t;
  t.dphi = -kI * w * (h_gamma * s.phi + k_full * s.phi.conjugate());
  t.dgamma = -kI * w * (h_full * s.gamma - s.gamma * h_full + k_full * s.sigma.adjoint() - s.sigma * k_full.adjoint());
  t.dsigma = -kI * (w * (h_full * s.sigma.transpose() + s.sigma * h_full.transpose() + k_full * s.gamma.transpose() +
                         s.gamma * k_full.transpose()) +
                    k_full);
  return t;
}

/// The right-hand side split as -i (A rho) and -i f(rho), where A carries the
/// free one-body dynamics plus the linear pairing term and f the rest.
struct SplitTangent {
  Tangent linear;
  Tangent nonlinear;
};

inline SplitTangent rhs_split(const HfbState& s, const HfbModel& m) {
  check_shapes(s, "rhs_split");
  const double w = s.grid.weight();
  const Kernel& h = m.one_body;
  const Kernel k_sigma = pairing_k(m.pair, s.sigma);
  const Kernel pair_source = pairing_k(m.pair, s.phi * s.phi.transpose());
  const Kernel k_full = k_sigma + pair_source;
  const Kernel b_gamma = interaction_b(m.pair, s.gamma);
  const Kernel b_full = interaction_b(m.pair, gamma_phi(s));

  SplitTangent out;
  out.linear.dphi = -kI * w * (h * s.phi);
  out.linear.dgamma = -kI * w * (h * s.gamma - s.gamma * h);
  out.linear.dsigma = -kI * (w * (h * s.sigma.transpose() + s.sigma * h.transpose()) + k_sigma);

  out.nonlinear.dphi = -kI * w * (b_gamma * s.phi + k_full * s.phi.conjugate());
  out.nonlinear.dgamma =
      -kI * w * (b_full * s.gamma - s.gamma * b_full + k_full * s.sigma.conjugate() - s.sigma * k_full.conjugate());
  // The affine source k[phi (x) phi] belongs to the nonlinear part; without it
  // A + f would not reproduce the sigma equation.
  out.nonlinear.dsigma = -kI * (w * (b_full * s.sigma.transpose() + s.sigma * b_full.transpose() +
                                     k_full * s.gamma.transpose() + s.gamma * k_full.transpose()) +
                                pair_source);
  return out;
}

/// Thrown when an integration produces non-finite values; carries the last
/// finite state.
class IntegrationAborted : public NumericalError {
 public:
  IntegrationAborted(const std::string& what, HfbState last, double time)
      : NumericalError(what), last_valid(std::move(last)), last_time(time) {}
  HfbState last_valid;
  double last_time;
};

inline HfbState advance(const HfbState& s, const Tangent& t, double dt) {
  HfbState out = s;
  out.phi += dt * t.dphi;
  out.gamma += dt * t.dgamma;
  out.sigma += dt * t.dsigma;
  return out;
}

/// One classical fourth-order Runge-Kutta step.
inline HfbState step_rk4(const HfbState& s, const HfbModel& m, double dt) {
  detail::require(dt > 0.0, "step_rk4: dt must be positive");
  const Tangent k1 = rhs(s, m);
  const Tangent k2 = rhs(advance(s, k1, 0.5 * dt), m);
  const Tangent k3 = rhs(advance(s, k2, 0.5 * dt), m);
  const Tangent k4 = rhs(advance(s, k3, dt), m);
  HfbState out = s;
  const double c = dt / 6.0;
  out.phi += c * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
  out.gamma += c * (k1.dgamma + 2.0 * k2.dgamma + 2.0 * k3.dgamma + k4.dgamma);
  out.sigma += c * (k1.dsigma + 2.0 * k2.dsigma + 2.0 * k3.dsigma + k4.dsigma);
  if (!all_finite(out)) throw IntegrationAborted("step_rk4: non-finite values after step", s, 0.0);
  return out;
}

enum class Scheme { Rk4 };

inline Scheme scheme_from_string(const std::string& name) {
  if (name == "rk4") return Scheme::Rk4;
  throw InvalidArgument("unknown integration scheme '" + name + "'");
}

struct Trajectory {
  std::vector<double> times;
  std::vector<HfbState> states;
  std::vector<std::string> warnings;
};

using Observer = std::function<void(double t, const HfbState&)>;

struct EvolveOptions {
  double final_time = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::Rk4;
  /// Observers fire every `observe_stride` steps and at the final time.
  int observe_stride = 1;
  /// States are stored every `store_stride` steps and at the final time.
  int store_stride = 1;
  std::vector<Observer> observers;
};

/// Upper bound on the operator norm of w * h_eff (max absolute row sum).
inline double generator_norm_bound(const HfbState& s, const HfbModel& m) {
  const Kernel h = mean_field_h(m, gamma_phi(s));
  return s.grid.weight() * h.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Integrates from t = 0 to final_time with ceil(T/dt) fixed steps; the last
/// step is shortened when dt does not divide T.
inline Trajectory evolve(const HfbState& initial, const HfbModel& m, const EvolveOptions& opt) {
  detail::require(opt.final_time >= 0.0, "evolve: final time must be nonnegative");
  detail::require(opt.dt > 0.0, "evolve: dt must be positive");
  detail::require(opt.observe_stride >= 1 && opt.store_stride >= 1, "evolve: strides must be >= 1");
  check_shapes(initial, "evolve");

  Trajectory traj;
  const double ratio = opt.final_time / opt.dt;
  const long steps = opt.final_time == 0.0 ? 0 : static_cast<long>(std::ceil(ratio - 1e-9));
  if (steps > 0 && opt.dt * generator_norm_bound(initial, m) >= 1.0)
    traj.warnings.push_back("dt exceeds the characteristic period 1/||h_eff||; RK4 may be inaccurate");

  HfbState current = initial;
  traj.times.push_back(0.0);
  traj.states.push_back(current);
  for (const auto& obs : opt.observers) obs(0.0, current);

  for (long step = 1; step <= steps; ++step) {
    const double t_prev = (step - 1) * opt.dt;
    const double t = step == steps ? opt.final_time : step * opt.dt;
    try {
      current = step_rk4(current, m, t - t_prev);
    } catch (const IntegrationAborted& e) {
      throw IntegrationAborted(std::string(e.what()) + " at t=" + std::to_string(t), e.last_valid, t_prev);
    }
    const bool last = step == steps;
    if (last || step % opt.store_stride == 0) {
      traj.times.push_back(t);
      traj.states.push_back(current);
    }
    if (last || step % opt.observe_stride == 0)
      for (const auto& obs : opt.observers) obs(t, current);
  }
  return traj;
}

}  // namespace hfb
