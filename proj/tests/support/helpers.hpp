#pragma once

#include <cmath>
#include <numbers>

#include "hfb/dynamics.hpp"
#include "hfb/observables.hpp"
#include "hfb/two_mode_reference.hpp"
#include "support/wick.hpp"

namespace testing_support {

using namespace hfb;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Interacting 1D model used throughout: periodized Gaussian v with
/// amplitude g and width s, optional cosine external potential.
inline HfbModel gaussian_model(int n, double g = 0.5, double width = 0.3, double external = 0.0) {
  const TorusGrid grid = make_grid(1, kTwoPi, n);
  return make_model(grid, FieldSpec::cosine(external, {1, 0, 0}), FieldSpec::gaussian(g, width));
}

inline HfbModel free_model(int n, double external = 0.0) { return gaussian_model(n, 0.0, 0.3, external); }

/// Library state -> Wick moments in the orthonormal basis a_i = sqrt(w) psi(x_i).
inline wick::Moments to_moments(const HfbState& s) {
  const double w = s.grid.weight();
  return {std::sqrt(w) * s.phi, w * s.gamma, w * s.sigma};
}

inline Tangent wick_rhs(const HfbState& s, const HfbModel& m) {
  const double w = s.grid.weight();
  const wick::Derivative d = wick::derivative(to_moments(s), w * m.one_body, m.pair.matrix.cast<Complex>());
  return {d.phi / std::sqrt(w), d.gamma / w, d.sigma / w};
}

inline double relative_drift(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing_support
