#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hfb/grid.hpp"

namespace hfb {

/// Truncated expectations (phi, gamma, sigma) of a bosonic quasifree state.
///
/// Kernels follow the quadrature convention of the grid: a kernel K acts on
/// a field as (Kf)(x_i) = w sum_j K[i][j] f(x_j), its trace is w sum_i K[i][i]
/// and the identity operator has kernel I/w. Multiplying a kernel by w gives
/// the matrix of the operator in the orthonormal node basis ("operator form").
struct HfbState {
  TorusGrid grid;
  ComplexField phi;
  Kernel gamma;
  Kernel sigma;

  Eigen::Index size() const { return grid.size(); }
};

inline HfbState vacuum_state(const TorusGrid& grid) {
  const Eigen::Index n = grid.size();
  return {grid, ComplexField::Zero(n), Kernel::Zero(n, n), Kernel::Zero(n, n)};
}

inline void check_shapes(const HfbState& s, const char* what) {
  detail::require_length(s.phi, s.grid.size(), what);
  detail::require_square(s.gamma, s.grid.size(), what);
  detail::require_square(s.sigma, s.grid.size(), what);
}

inline bool all_finite(const HfbState& s) {
  return s.phi.allFinite() && s.gamma.allFinite() && s.sigma.allFinite();
}

namespace detail {

inline double min_eigenvalue(const Kernel& a) {
  if (a.rows() == 0) return 0.0;
  const Kernel herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Kernel> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

inline double nuclear_norm(const Kernel& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::BDCSVD<Kernel> svd(a);
  return svd.singularValues().sum();
}

inline double real_trace(const Kernel& k, double w) { return w * k.diagonal().real().sum(); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Generalized density matrix

/// Gamma = [[gamma, sigma], [conj(sigma), I/w + conj(gamma)]] in kernel form.
struct GeneralizedDensityMatrix {
  Kernel matrix;
};

inline GeneralizedDensityMatrix generalized_density_matrix(const HfbState& s) {
  check_shapes(s, "generalized_density_matrix");
  const Eigen::Index n = s.size();
  const double w = s.grid.weight();
  Kernel g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = s.gamma;
  g.topRightCorner(n, n) = s.sigma;
  g.bottomLeftCorner(n, n) = s.sigma.conjugate();
  g.bottomRightCorner(n, n) = s.gamma.conjugate();
  g.bottomRightCorner(n, n).diagonal().array() += 1.0 / w;
  return {std::move(g)};
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string what;
  double magnitude;
};

struct ValidityReport {
  double gamma_hermiticity_defect = 0.0;
  double sigma_symmetry_defect = 0.0;
  double min_eig_gamma = 0.0;
  double min_eig_generalized = 0.0;
  bool finite = true;
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
};

/// Checks gamma = gamma^dagger >= 0, sigma = sigma^T and Gamma >= 0.
///
/// Symmetry defects must not exceed tol; eigenvalue floors must not fall below
/// -tol * (1 + Tr gamma).
inline ValidityReport validate(const HfbState& s, double tol) {
  check_shapes(s, "validate");
  ValidityReport r;
  r.finite = all_finite(s);
  if (!r.finite) {
    r.violations.push_back({"non-finite entries", std::numeric_limits<double>::infinity()});
    return r;
  }
  r.gamma_hermiticity_defect = s.size() ? hermiticity_defect(s.gamma) : 0.0;
  r.sigma_symmetry_defect = s.size() ? symmetry_defect(s.sigma) : 0.0;
  r.min_eig_gamma = detail::min_eigenvalue(s.gamma);
  r.min_eig_generalized = detail::min_eigenvalue(generalized_density_matrix(s).matrix);
  const double floor = -tol * (1.0 + std::abs(detail::real_trace(s.gamma, s.grid.weight())));
  if (r.gamma_hermiticity_defect > tol) r.violations.push_back({"gamma not Hermitian", r.gamma_hermiticity_defect});
  if (r.sigma_symmetry_defect > tol) r.violations.push_back({"sigma not symmetric", r.sigma_symmetry_defect});
  if (r.min_eig_gamma < floor) r.violations.push_back({"gamma not positive", r.min_eig_gamma});
  if (r.min_eig_generalized < floor) r.violations.push_back({"Gamma not positive", r.min_eig_generalized});
  return r;
}

// ---------------------------------------------------------------------------
// Constructors

/// Pure condensate: (phi, 0, 0).
inline HfbState coherent_state(const TorusGrid& grid, const ComplexField& phi) {
  detail::require_length(phi, grid.size(), "coherent_state");
  HfbState s = vacuum_state(grid);
  s.phi = phi;
  return s;
}

/// Single-mode squeezing in the eigenbasis of h, ordered by ascending energy.
struct SqueezeParameters {
  std::vector<double> amplitude;  // r_a
  std::vector<double> phase;      // theta_a, zero when absent
  double chemical_potential = 0.0;
};

/// Thermal state of h - mu at inverse temperature beta, then rotated by the
/// Bogoliubov map W = [[U, V], [conj V, conj U]] with
/// U = E cosh(r) E^dagger and V = E e^{i theta} sinh(r) E^T, E the
/// eigenvectors of h. Gamma is transformed as W Gamma W^dagger.
inline HfbState squeezed_thermal_state(const TorusGrid& grid, const Kernel& h, double beta,
                                       const SqueezeParameters& squeeze,
                                       const ComplexField& phi = ComplexField()) {
  const Eigen::Index n = grid.size();
  const double w = grid.weight();
  detail::require_square(h, n, "squeezed_thermal_state");
  detail::require(beta > 0.0, "squeezed_thermal_state: beta must be positive");
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_defect(h) > 1e-10 * scale) throw InvalidArgument("squeezed_thermal_state: h is not Hermitian");
  detail::require(static_cast<Eigen::Index>(squeeze.amplitude.size()) <= n,
                  "squeezed_thermal_state: more squeeze amplitudes than modes");

  const Kernel h_op = 0.5 * w * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Kernel> eig(h_op);
  if (eig.info() != Eigen::Success) throw NumericalError("squeezed_thermal_state: eigensolver failed");
  const Kernel& e = eig.eigenvectors();

  Eigen::VectorXd occupation(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const double x = beta * (eig.eigenvalues()[a] - squeeze.chemical_potential);
    const double denom = std::expm1(x);
    if (!(denom > 0.0))
      throw InvalidArgument("squeezed_thermal_state: mode " + std::to_string(a) + " has e^{beta eps} - 1 <= 0");
    occupation[a] = 1.0 / denom;
  }

  Eigen::VectorXd ch = Eigen::VectorXd::Ones(n);
  Eigen::VectorXcd sh = Eigen::VectorXcd::Zero(n);
  for (std::size_t a = 0; a < squeeze.amplitude.size(); ++a) {
    const double r = squeeze.amplitude[a];
    const double theta = a < squeeze.phase.size() ? squeeze.phase[a] : 0.0;
    ch[static_cast<Eigen::Index>(a)] = std::cosh(r);
    sh[static_cast<Eigen::Index>(a)] = std::polar(std::sinh(r), theta);
  }
  const Kernel u = e * ch.asDiagonal() * e.adjoint();
  const Kernel v = e * sh.asDiagonal() * e.transpose();

  const Kernel gamma_th = e * occupation.asDiagonal() * e.adjoint();
  Kernel big_gamma = Kernel::Zero(2 * n, 2 * n);
  big_gamma.topLeftCorner(n, n) = gamma_th;
  big_gamma.bottomRightCorner(n, n) = gamma_th.conjugate();
  big_gamma.bottomRightCorner(n, n).diagonal().array() += 1.0;
  Kernel wmap(2 * n, 2 * n);
  wmap << u, v, v.conjugate(), u.conjugate();
  const Kernel rotated = wmap * big_gamma * wmap.adjoint();

  HfbState s = vacuum_state(grid);
  if (phi.size() != 0) {
    detail::require_length(phi, n, "squeezed_thermal_state phi");
    s.phi = phi;
  }
  const Kernel g = rotated.topLeftCorner(n, n) / w;
  const Kernel p = rotated.topRightCorner(n, n) / w;
  s.gamma = 0.5 * (g + g.adjoint());
  s.sigma = 0.5 * (p + p.transpose());
  return s;
}

/// Random admissible state supported on Fourier modes with |m_a| <= cutoff.
///
/// Inside that subspace a random orthonormal mode basis gets random thermal
/// occupations in [0, occupation) and random single-mode squeezing with
/// r in [0, max_squeeze); phi is a random band-limited field with
/// ||phi||^2 = condensate. Deterministic for a fixed seed and build.
inline HfbState random_band_limited_state(const TorusGrid& grid, std::uint64_t seed, int cutoff,
                                          double occupation = 0.3, double max_squeeze = 0.4,
                                          double condensate = 1.0) {
  const Eigen::Index n = grid.size();
  const double w = grid.weight();
  std::vector<Eigen::Index> modes;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto m = grid.mode(i);
    bool inside = true;
    for (int a = 0; a < grid.dimension(); ++a)
      inside = inside && std::abs(m[a]) <= cutoff && 2 * std::abs(m[a]) < grid.points_per_axis();
    if (inside) modes.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(modes.size());
  detail::require(r > 0, "random_band_limited_state: empty mode set");

  // Orthonormal plane waves in the node basis.
  Kernel q(n, r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const auto k = grid.wavevector(modes[static_cast<std::size_t>(c)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto x = grid.node(i);
      q(i, c) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Kernel a(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  Eigen::SelfAdjointEigenSolver<Kernel> eig(a + a.adjoint());
  const Kernel e = eig.eigenvectors();

  Eigen::VectorXd occ(r), ch(r);
  Eigen::VectorXcd sh(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    occ[i] = occupation * unit(rng);
    const double rr = max_squeeze * unit(rng);
    ch[i] = std::cosh(rr);
    sh[i] = std::polar(std::sinh(rr), 2.0 * std::numbers::pi * unit(rng));
  }
  const Kernel u = e * ch.asDiagonal() * e.adjoint();
  const Kernel v = e * sh.asDiagonal() * e.transpose();
  const Kernel g0 = e * occ.asDiagonal() * e.adjoint();
  const Kernel one_plus = Kernel::Identity(r, r) + g0.conjugate();
  // W diag(g0, 1 + conj g0) W^dagger, upper blocks only.
  const Kernel gamma_sub = u * g0 * u.adjoint() + v * one_plus * v.adjoint();
  const Kernel sigma_sub = u * g0 * v.transpose() + v * one_plus * u.transpose();

  HfbState s = vacuum_state(grid);
  const Kernel g = q * gamma_sub * q.adjoint() / w;
  const Kernel p = q * sigma_sub * q.transpose() / w;
  s.gamma = 0.5 * (g + g.adjoint());
  s.sigma = 0.5 * (p + p.transpose());
  Eigen::VectorXcd coeff(r);
  for (Eigen::Index i = 0; i < r; ++i) coeff[i] = Complex(normal(rng), normal(rng));
  ComplexField phi = q * coeff;
  if (condensate > 0.0) {
    phi *= std::sqrt(condensate / (w * phi.squaredNorm()));
  } else {
    phi.setZero();
  }
  s.phi = phi;
  return s;
}

// ---------------------------------------------------------------------------
// Sobolev-weighted norms

struct XjNorm {
  int j = 0;
  double value = 0.0;
};

/// ||M^j phi|| + ||M^j gamma M^j||_1 + ||M^j sigma||_2 + ||sigma M^j||_2 for an
/// arbitrary triple (gamma need not be positive, e.g. a difference of states).
inline double x_norm(const TorusGrid& grid, const ComplexField& phi, const Kernel& gamma, const Kernel& sigma,
                     int j) {
  detail::require(j >= 0 && j <= 3, "xj_norm: order j must be in {0,1,2,3}, got " + std::to_string(j));
  const double w = grid.weight();
  if (j == 0) {
    return std::sqrt(w) * phi.norm() + detail::nuclear_norm(w * gamma) + 2.0 * w * sigma.norm();
  }
  const Kernel mj = multiplier_matrix(sobolev_weight(grid, j));
  const double phi_part = std::sqrt(w) * (mj * phi).norm();
  const double gamma_part = detail::nuclear_norm(w * (mj * gamma * mj));
  const double sigma_part = w * ((mj * sigma).norm() + (sigma * mj).norm());
  return phi_part + gamma_part + sigma_part;
}

inline XjNorm xj_norm(const HfbState& s, int j) {
  check_shapes(s, "xj_norm");
  return {j, x_norm(s.grid, s.phi, s.gamma, s.sigma, j)};
}

/// X^j distance between two states on the same grid.
inline double x_distance(const HfbState& a, const HfbState& b, int j = 0) {
  detail::require(a.grid == b.grid, "x_distance: states live on different grids");
  return x_norm(a.grid, a.phi - b.phi, a.gamma - b.gamma, a.sigma - b.sigma, j);
}

/// U(1) gauge action: (e^{i theta} phi, gamma, e^{2 i theta} sigma).
inline HfbState gauge_transform(const HfbState& s, double theta) {
  HfbState out = s;
  out.phi *= std::polar(1.0, theta);
  out.sigma *= std::polar(1.0, 2.0 * theta);
  return out;
}

}  // namespace hfb
