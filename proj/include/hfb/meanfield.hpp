#pragma once

#include <cmath>
#include <string>

#include "hfb/field.hpp"
#include "hfb/state.hpp"

namespace hfb {

/// Everything the equations of motion need besides the state: the grid, the
/// external potential V, the pair interaction v and the one-body kernel
/// h = -Delta + V.
struct HfbModel {
  TorusGrid grid;
  RealField external;
  PairKernel pair;
  Kernel one_body;
};

/// Kernel of -Delta: spectral multiplier matrix divided by the weight.
inline Kernel kinetic_kernel(const TorusGrid& grid) {
  MultiplierOperator minus_laplacian = laplacian(grid);
  minus_laplacian.symbol = -minus_laplacian.symbol;
  Kernel k = multiplier_matrix(minus_laplacian) / grid.weight();
  // The symbol is real and even, so the exact matrix is real symmetric.
  return Kernel(0.5 * (k + k.adjoint()).real().cast<Complex>());
}

inline HfbModel make_model(const TorusGrid& grid, const RealField& external, PairKernel pair) {
  detail::require(external.size() == grid.size(), "make_model: external potential length mismatch");
  detail::require(pair.grid == grid, "make_model: pair kernel lives on a different grid");
  Kernel h = kinetic_kernel(grid);
  h.diagonal().array() += external.cast<Complex>().array() / grid.weight();
  return {grid, external, std::move(pair), std::move(h)};
}

inline HfbModel make_model(const TorusGrid& grid, const FieldSpec& external, const FieldSpec& pair) {
  return make_model(grid, sample_real_field(grid, external), pair_kernel(grid, pair));
}

/// d(alpha)(x) = alpha(x, x).
inline RealField density(const Kernel& gamma) {
  const ComplexField diag = gamma.diagonal();
  if (diag.size() == 0) return RealField();
  const double imag = diag.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-8 * std::max(1.0, diag.real().cwiseAbs().maxCoeff()))
    throw NumericalError("density: diagonal has imaginary part " + format_double(imag));
  return diag.real();
}

/// (v * d(gamma))(x_i) = w sum_j v_per(x_i - x_j) gamma[j][j], by FFT convolution.
inline RealField direct_potential(const PairKernel& v, const Kernel& gamma) {
  detail::require_square(gamma, v.grid.size(), "direct_potential");
  ComplexField spectrum = fft_forward(v.grid, density(gamma).cast<Complex>());
  spectrum.array() *= v.spectrum.array();
  return v.grid.weight() * fft_inverse(v.grid, std::move(spectrum)).real();
}

/// (v # alpha)(x; y) = v(x - y) alpha(x; y).
inline Kernel exchange(const PairKernel& v, const Kernel& alpha) {
  detail::require_square(alpha, v.grid.size(), "exchange");
  return alpha.cwiseProduct(v.matrix.cast<Complex>());
}

/// b[gamma] = v * d(gamma) + v # gamma, as a kernel.
inline Kernel interaction_b(const PairKernel& v, const Kernel& gamma) {
  Kernel b = exchange(v, gamma);
  b.diagonal().array() += direct_potential(v, gamma).cast<Complex>().array() / v.grid.weight();
  return b;
}

/// h(gamma) = h + b[gamma].
inline Kernel mean_field_h(const HfbModel& m, const Kernel& gamma) { return m.one_body + interaction_b(m.pair, gamma); }

/// k(sigma) = v # sigma.
inline Kernel pairing_k(const PairKernel& v, const Kernel& sigma) { return exchange(v, sigma); }

/// gamma^phi = gamma + |phi><phi|.
inline Kernel gamma_phi(const HfbState& s) { return s.gamma + s.phi * s.phi.adjoint(); }

/// sigma^phi = sigma + |phi><conj phi|, i.e. the kernel sigma(x,y) + phi(x) phi(y).
inline Kernel sigma_phi(const HfbState& s) { return s.sigma + s.phi * s.phi.transpose(); }

/// Coefficients of the quadratic HFB Hamiltonian.
///
/// block = [[h_eff, k_eff], [-conj k_eff, -conj h_eff]] in kernel form. It
/// satisfies J block J = block^dagger for J = diag(I, -I); multiplied by w it
/// generates the Bogoliubov propagator i dW/dt = w block W.
struct HfbGenerator {
  Kernel h_eff;
  Kernel k_eff;
  Kernel block;
};

inline Kernel assemble_block(const Kernel& h_eff, const Kernel& k_eff) {
  const Eigen::Index n = h_eff.rows();
  Kernel a(2 * n, 2 * n);
  a << h_eff, k_eff, -k_eff.conjugate(), -h_eff.conjugate();
  return a;
}

inline HfbGenerator hfb_generator(const HfbState& s, const HfbModel& m) {
  check_shapes(s, "hfb_generator");
  Kernel h_eff = mean_field_h(m, gamma_phi(s));
  Kernel k_eff = pairing_k(m.pair, sigma_phi(s));
  Kernel block = assemble_block(h_eff, k_eff);
  return {std::move(h_eff), std::move(k_eff), std::move(block)};
}

/// ||M k[sigma]||_HS / (||M sigma||_HS + ||sigma M||_HS).
inline double k_estimate_ratio(const PairKernel& v, const Kernel& sigma, const Kernel& m_matrix) {
  detail::require_square(sigma, v.grid.size(), "k_estimate_ratio");
  if (max_abs(sigma) == 0.0) throw InvalidArgument("k_estimate_ratio: sigma is zero");
  const double numerator = (m_matrix * pairing_k(v, sigma)).norm();
  const double denominator = (m_matrix * sigma).norm() + (sigma * m_matrix).norm();
  return numerator / denominator;
}

inline double k_estimate_ratio(const PairKernel& v, const Kernel& sigma) {
  return k_estimate_ratio(v, sigma, multiplier_matrix(sobolev_weight(v.grid, 1.0)));
}

}  // namespace hfb
