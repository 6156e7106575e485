#pragma once

// Reference system with two spatial nodes (d = 1, n = 2, L = 2 pi) and a
// constant pair potential. Its equations of motion are written out entry by
// entry on plain arrays, in the orthonormal node basis a_i = sqrt(w) psi(x_i),
// so that the integrator shares no code with the matrix implementation.
// The generator tool tools/make_two_mode_fixture.cpp uses this header to
// produce the committed golden files.

#include <array>
#include <complex>
#include <numbers>
#include <vector>

#include "hfb/meanfield.hpp"

namespace hfb::oracle {

struct TwoModeValues {
  std::array<Complex, 2> phi{};
  std::array<std::array<Complex, 2>, 2> gamma{};
  std::array<std::array<Complex, 2>, 2> sigma{};
};

struct TwoModeSystem {
  double length = 2.0 * std::numbers::pi;
  double coupling = 0.7;
  std::array<double, 2> external{0.3, -0.1};
  TwoModeValues initial;

  double weight() const { return length / 2.0; }

  /// One-body matrix in the node basis: -Delta on two nodes has symbol
  /// {0, (2 pi / L)^2}, i.e. (k^2 / 2) [[1, -1], [-1, 1]].
  std::array<std::array<double, 2>, 2> one_body() const {
    const double k = 2.0 * std::numbers::pi / length;
    const double half = 0.5 * k * k;
    return {{{half + external[0], -half}, {-half, half + external[1]}}};
  }
};

inline TwoModeSystem two_mode_system() {
  TwoModeSystem sys;
  using C = Complex;
  sys.initial.phi = {C(0.6, 0.2), C(-0.3, 0.4)};
  sys.initial.gamma = {{{C(0.20, 0.0), C(0.05, 0.02)}, {C(0.05, -0.02), C(0.12, 0.0)}}};
  sys.initial.sigma = {{{C(0.10, 0.03), C(0.04, 0.0)}, {C(0.04, 0.0), C(0.08, -0.02)}}};
  return sys;
}

/// Entrywise HFB right-hand side (time derivatives, not multiplied by i).
inline TwoModeValues two_mode_derivative(const TwoModeSystem& sys, const TwoModeValues& s) {
  const auto h = sys.one_body();
  const double v = sys.coupling;
  using C = Complex;
  const C minus_i(0.0, -1.0);
  C hg[2][2], hp[2][2], kp[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      hg[i][j] = h[i][j] + v * s.gamma[i][j];
      hp[i][j] = h[i][j] + v * (s.gamma[i][j] + s.phi[i] * std::conj(s.phi[j]));
      kp[i][j] = v * (s.sigma[i][j] + s.phi[i] * s.phi[j]);
    }
    for (int l = 0; l < 2; ++l) {
      hg[i][i] += v * s.gamma[l][l];
      hp[i][i] += v * (s.gamma[l][l] + std::norm(s.phi[l]));
    }
  }
  TwoModeValues d;
  for (int i = 0; i < 2; ++i) {
    C acc = 0.0;
    for (int j = 0; j < 2; ++j) acc += hg[i][j] * s.phi[j] + kp[i][j] * std::conj(s.phi[j]);
    d.phi[i] = minus_i * acc;
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      C g = 0.0, p = 0.0;
      for (int l = 0; l < 2; ++l) {
        g += hp[i][l] * s.gamma[l][j] - s.gamma[i][l] * hp[l][j] + kp[i][l] * std::conj(s.sigma[j][l]) -
             s.sigma[i][l] * std::conj(kp[j][l]);
        p += hp[i][l] * s.sigma[j][l] + s.sigma[i][l] * hp[j][l] + kp[i][l] * s.gamma[j][l] +
             s.gamma[i][l] * kp[j][l];
      }
      d.gamma[i][j] = minus_i * g;
      d.sigma[i][j] = minus_i * (p + kp[i][j]);
    }
  }
  return d;
}

inline TwoModeValues two_mode_axpy(const TwoModeValues& s, double a, const TwoModeValues& d) {
  TwoModeValues out = s;
  for (int i = 0; i < 2; ++i) {
    out.phi[i] += a * d.phi[i];
    for (int j = 0; j < 2; ++j) {
      out.gamma[i][j] += a * d.gamma[i][j];
      out.sigma[i][j] += a * d.sigma[i][j];
    }
  }
  return out;
}

inline TwoModeValues two_mode_rk4_step(const TwoModeSystem& sys, const TwoModeValues& s, double dt) {
  const auto k1 = two_mode_derivative(sys, s);
  const auto k2 = two_mode_derivative(sys, two_mode_axpy(s, 0.5 * dt, k1));
  const auto k3 = two_mode_derivative(sys, two_mode_axpy(s, 0.5 * dt, k2));
  const auto k4 = two_mode_derivative(sys, two_mode_axpy(s, dt, k3));
  TwoModeValues out = s;
  for (int i = 0; i < 2; ++i) {
    out.phi[i] += dt / 6.0 * (k1.phi[i] + 2.0 * k2.phi[i] + 2.0 * k3.phi[i] + k4.phi[i]);
    for (int j = 0; j < 2; ++j) {
      out.gamma[i][j] += dt / 6.0 * (k1.gamma[i][j] + 2.0 * k2.gamma[i][j] + 2.0 * k3.gamma[i][j] + k4.gamma[i][j]);
      out.sigma[i][j] += dt / 6.0 * (k1.sigma[i][j] + 2.0 * k2.sigma[i][j] + 2.0 * k3.sigma[i][j] + k4.sigma[i][j]);
    }
  }
  return out;
}

/// Particle number sum_i gamma_ii + |phi_i|^2.
inline double two_mode_particle_number(const TwoModeValues& s) {
  double n = 0.0;
  for (int i = 0; i < 2; ++i) n += s.gamma[i][i].real() + std::norm(s.phi[i]);
  return n;
}

/// <H> for H = sum h_ij a_i^* a_j + 1/2 sum v_ij a_i^* a_j^* a_j a_i, with the
/// quartic moment expanded by Wick's rule around the mean phi.
inline double two_mode_energy(const TwoModeSystem& sys, const TwoModeValues& s) {
  const auto h = sys.one_body();
  const double v = sys.coupling;
  Complex e = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex pi = s.phi[i], pj = s.phi[j];
      e += h[i][j] * (s.gamma[j][i] + std::conj(pi) * pj);
      Complex quartic = std::norm(pi) * std::norm(pj);
      quartic += std::conj(pi) * std::conj(pj) * s.sigma[j][i] + pi * pj * std::conj(s.sigma[i][j]);
      quartic += std::conj(pi) * pj * s.gamma[i][j] + std::conj(pj) * pi * s.gamma[j][i];
      quartic += std::norm(pi) * s.gamma[j][j] + std::norm(pj) * s.gamma[i][i];
      quartic += std::norm(s.sigma[i][j]) + s.gamma[j][i] * s.gamma[i][j] + s.gamma[i][i] * s.gamma[j][j];
      e += 0.5 * v * quartic;
    }
  }
  return e.real();
}

struct TwoModeTrajectory {
  std::vector<double> times;
  std::vector<TwoModeValues> values;
};

/// Brute-force RK4 at step dt, storing every `stride` steps.
inline TwoModeTrajectory integrate_two_mode(const TwoModeSystem& sys, double final_time, double dt, long stride) {
  const long steps = static_cast<long>(std::llround(final_time / dt));
  TwoModeTrajectory traj;
  TwoModeValues s = sys.initial;
  traj.times.push_back(0.0);
  traj.values.push_back(s);
  for (long k = 1; k <= steps; ++k) {
    s = two_mode_rk4_step(sys, s, dt);
    if (k % stride == 0 || k == steps) {
      traj.times.push_back(k * dt);
      traj.values.push_back(s);
    }
  }
  return traj;
}

// Bridges to the library representation (kernel form on a two-node grid).

inline TorusGrid two_mode_grid(const TwoModeSystem& sys) { return detail::unchecked_grid(1, sys.length, 2); }

inline HfbModel two_mode_model(const TwoModeSystem& sys) {
  const TorusGrid grid = two_mode_grid(sys);
  RealField external(2);
  external << sys.external[0], sys.external[1];
  RealField profile = RealField::Constant(2, sys.coupling);
  return make_model(grid, external, pair_kernel_from_profile(grid, profile));
}

inline HfbState to_state(const TwoModeSystem& sys, const TwoModeValues& s) {
  const double w = sys.weight();
  HfbState out = vacuum_state(two_mode_grid(sys));
  for (int i = 0; i < 2; ++i) {
    out.phi[i] = s.phi[i] / std::sqrt(w);
    for (int j = 0; j < 2; ++j) {
      out.gamma(i, j) = s.gamma[i][j] / w;
      out.sigma(i, j) = s.sigma[i][j] / w;
    }
  }
  return out;
}

}  // namespace hfb::oracle
