#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "hfb/meanfield.hpp"

namespace hfb {

/// N_gamma = Tr gamma.
inline double gamma_particles(const HfbState& s) { return detail::real_trace(s.gamma, s.grid.weight()); }

/// N_phi = ||phi||^2.
inline double condensate_particles(const HfbState& s) { return s.grid.weight() * s.phi.squaredNorm(); }

/// Total particle number Tr gamma + ||phi||^2.
inline double particle_number(const HfbState& s) { return gamma_particles(s) + condensate_particles(s); }

namespace detail {

/// Tr[A B] for kernels: w^2 sum_ij A_ij B_ji.
inline Complex trace_product(const Kernel& a, const Kernel& b, double w) {
  return w * w * a.cwiseProduct(b.transpose()).sum();
}

}  // namespace detail

/// Energy functional
///   Tr[h (gamma + |phi><phi|)] + Tr[b[|phi><phi|] gamma] + 1/2 Tr[b[gamma] gamma]
///   + 1/2 iint v(x - y) |sigma(x, y) + phi(x) phi(y)|^2 dx dy.
inline double energy(const HfbState& s, const HfbModel& m) {
  check_shapes(s, "energy");
  const double w = s.grid.weight();
  const Kernel condensate = s.phi * s.phi.adjoint();
  Complex e = detail::trace_product(m.one_body, s.gamma + condensate, w);
  e += detail::trace_product(interaction_b(m.pair, condensate), s.gamma, w);
  e += 0.5 * detail::trace_product(interaction_b(m.pair, s.gamma), s.gamma, w);
  const Kernel pair_amplitude = s.sigma + s.phi * s.phi.transpose();
  e += 0.5 * w * w * (m.pair.matrix.array() * pair_amplitude.array().abs2()).sum();
  if (std::abs(e.imag()) > 1e-10 * (1.0 + std::abs(e.real())))
    throw NumericalError("energy: imaginary part " + std::to_string(e.imag()) + " signals a non-Hermitian gamma");
  return e.real();
}

/// Both sides of ||sigma||^2_{H^1} <= 2 ||gamma||_{H^1} (1 + Tr gamma).
///
/// `lhs` squares the sum a + b of the two Hilbert-Schmidt norms
/// a = ||M sigma||, b = ||sigma M||; `lhs_split` uses a^2 + b^2. A pure
/// squeezed single mode saturates the split form and violates the summed form
/// by a factor 2, so both are reported.
struct SigmaBound {
  double lhs = 0.0;
  double lhs_split = 0.0;
  double rhs = 0.0;
  double slack() const { return rhs - lhs; }
  double split_slack() const { return rhs - lhs_split; }
};

inline SigmaBound sigma_bound(const HfbState& s, const Kernel& m_matrix) {
  const double w = s.grid.weight();
  const double a = w * (m_matrix * s.sigma).norm();
  const double b = w * (s.sigma * m_matrix).norm();
  const double gamma_h1 = detail::nuclear_norm(w * (m_matrix * s.gamma * m_matrix));
  return {(a + b) * (a + b), a * a + b * b, 2.0 * gamma_h1 * (1.0 + gamma_particles(s))};
}

inline SigmaBound sigma_bound(const HfbState& s) {
  return sigma_bound(s, multiplier_matrix(sobolev_weight(s.grid, 1.0)));
}

/// RHS - LHS of the summed-norm form.
inline double sigma_bound_slack(const HfbState& s) { return sigma_bound(s).slack(); }

/// Smallest eigenvalue of the generalized density matrix (kernel form).
inline double gamma_floor(const HfbState& s) { return detail::min_eigenvalue(generalized_density_matrix(s).matrix); }

// ---------------------------------------------------------------------------
// Diagnostics

struct DiagnosticsRecord {
  double t = 0.0;
  double n_total = 0.0;
  double n_gamma = 0.0;
  double n_phi = 0.0;
  double energy = 0.0;
  double min_eig_gamma_matrix = 0.0;
  double sigma_bound_slack = 0.0;
  double k_estimate_ratio = 0.0;
  double x1_norm = 0.0;
  double gamma_hermiticity_defect = 0.0;
  double sigma_symmetry_defect = 0.0;

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

inline constexpr std::array<const char*, 11> kDiagnosticsColumns{
    "t",      "N_total",        "N_gamma",           "N_phi",  "energy",
    "min_eig_Gamma", "sigma_bound_slack", "k_estimate_ratio", "X1_norm", "gamma_hermiticity_defect",
    "sigma_symmetry_defect"};

/// Model plus the precomputed Sobolev multiplier used by every record.
struct DiagnosticsContext {
  explicit DiagnosticsContext(const HfbModel& m)
      : model(&m), sobolev(multiplier_matrix(sobolev_weight(m.grid, 1.0))) {}
  const HfbModel* model;
  Kernel sobolev;
};

/// Snapshot of all monitored quantities. The k-estimate ratio is reported as
/// 0 when sigma vanishes.
inline DiagnosticsRecord record(const HfbState& s, double t, const DiagnosticsContext& ctx) {
  DiagnosticsRecord r;
  r.t = t;
  r.n_gamma = gamma_particles(s);
  r.n_phi = condensate_particles(s);
  r.n_total = r.n_gamma + r.n_phi;
  r.energy = energy(s, *ctx.model);
  r.min_eig_gamma_matrix = gamma_floor(s);
  r.sigma_bound_slack = sigma_bound(s, ctx.sobolev).slack();
  r.k_estimate_ratio = max_abs(s.sigma) == 0.0 ? 0.0 : k_estimate_ratio(ctx.model->pair, s.sigma, ctx.sobolev);
  const double w = s.grid.weight();
  r.x1_norm = std::sqrt(w) * (ctx.sobolev * s.phi).norm() +
              detail::nuclear_norm(w * (ctx.sobolev * s.gamma * ctx.sobolev)) +
              w * ((ctx.sobolev * s.sigma).norm() + (s.sigma * ctx.sobolev).norm());
  r.gamma_hermiticity_defect = hermiticity_defect(s.gamma);
  r.sigma_symmetry_defect = symmetry_defect(s.sigma);
  return r;
}

inline void write_csv_header(std::ostream& out) {
  for (std::size_t c = 0; c < kDiagnosticsColumns.size(); ++c) out << (c ? "," : "") << kDiagnosticsColumns[c];
  out << '\n';
}

inline void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
  const std::array<double, 11> values{r.t,
                                      r.n_total,
                                      r.n_gamma,
                                      r.n_phi,
                                      r.energy,
                                      r.min_eig_gamma_matrix,
                                      r.sigma_bound_slack,
                                      r.k_estimate_ratio,
                                      r.x1_norm,
                                      r.gamma_hermiticity_defect,
                                      r.sigma_symmetry_defect};
  for (std::size_t c = 0; c < values.size(); ++c) out << (c ? "," : "") << format_double(values[c]);
  out << '\n';
}

}  // namespace hfb
