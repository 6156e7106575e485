#pragma once

// Verification suites behind `hfb verify --suite <name>`. Each suite builds
// one of the shipped scenarios, measures the quantities it is about, and
// compares them with fixed thresholds. Reports are plain CSV lines:
//   suite,check,value,relation,threshold,status

#include <chrono>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "hfb/bogoliubov.hpp"
#include "hfb/mild.hpp"
#include "hfb/observables.hpp"
#include "hfb/oracle.hpp"

namespace hfb {

// ---------------------------------------------------------------------------
// Shipped scenarios

namespace scenarios {

inline constexpr double kLength = 2.0 * std::numbers::pi;

/// d = 1 torus of side 2 pi, periodized Gaussian v (g = 0.5, width 0.3), V = 0.
inline HfbModel interacting_model(int n) {
  return make_model(make_grid(1, kLength, n), FieldSpec::constant(0.0), FieldSpec::gaussian(0.5, 0.3));
}

inline HfbModel free_model(int n) {
  return make_model(make_grid(1, kLength, n), FieldSpec::cosine(0.4, {1, 0, 0}), FieldSpec::constant(0.0));
}

/// Smooth condensate built from Fourier modes |m| <= 3, ||phi||^2 = norm.
inline ComplexField condensate(const TorusGrid& grid, double norm = 2.0) {
  ComplexField phi = sample_field(grid, FieldSpec::random(2024, 3));
  phi *= std::sqrt(norm / (grid.weight() * phi.squaredNorm()));
  return phi;
}

/// Coherent initial state with particle number 2.
inline HfbState coherent_initial(const HfbModel& m) { return coherent_state(m.grid, condensate(m.grid)); }

/// Thermal state of h at beta = 1, mu = -0.5, three lowest modes squeezed,
/// plus the same condensate.
inline HfbState squeezed_thermal_initial(const HfbModel& m) {
  const SqueezeParameters sq{{0.3, 0.2, 0.2}, {0.5, 1.0, -0.7}, -0.5};
  return squeezed_thermal_state(m.grid, m.one_body, 1.0, sq, condensate(m.grid));
}

/// Symmetric sigma kernel with continuum Fourier coefficients on |m| <= cutoff
/// drawn from the seed; the same continuum function for every n.
inline Kernel random_sigma(const TorusGrid& grid, std::uint64_t seed, int cutoff = 4) {
  std::vector<Eigen::Index> modes;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto mode = grid.mode(i);
    bool inside = true;
    for (int a = 0; a < grid.dimension(); ++a)
      inside = inside && std::abs(mode[a]) <= cutoff && 2 * std::abs(mode[a]) < grid.points_per_axis();
    if (inside) modes.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(modes.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Kernel c(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) c(i, j) = c(j, i) = Complex(normal(rng), normal(rng));
  Kernel q(grid.size(), r);
  const double norm = 1.0 / std::sqrt(grid.volume());
  for (Eigen::Index col = 0; col < r; ++col) {
    const auto k = grid.wavevector(modes[static_cast<std::size_t>(col)]);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const auto x = grid.node(i);
      q(i, col) = std::polar(norm, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
    }
  }
  return q * c * q.transpose();
}

}  // namespace scenarios

// ---------------------------------------------------------------------------
// Reports

struct CheckResult {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">="
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }

  void add(std::string name, double value, std::string relation, double threshold) {
    bool ok = false;
    if (relation == "<") ok = value < threshold;
    if (relation == "<=") ok = value <= threshold;
    if (relation == ">=") ok = value >= threshold;
    checks.push_back({std::move(name), value, std::move(relation), threshold, ok});
  }
};

inline void write_report(std::ostream& out, const SuiteReport& r) {
  for (const auto& c : r.checks)
    out << r.suite << ',' << c.name << ',' << format_double(c.value) << ',' << c.relation << ','
        << format_double(c.threshold) << ',' << (c.pass ? "pass" : "fail") << '\n';
}

// ---------------------------------------------------------------------------
// Measurements shared by the suites and the acceptance tests

struct DriftMeasurement {
  double number = 0.0;
  double energy = 0.0;
  double gamma_hermiticity = 0.0;
  double sigma_symmetry = 0.0;
};

/// Max over every step of the relative drift of N and E (E relative to
/// |E(0)| + 1), and the largest structural defects seen.
inline DriftMeasurement measure_drift(const HfbState& initial, const HfbModel& m, double final_time, double dt) {
  const double n0 = particle_number(initial);
  const double e0 = energy(initial, m);
  DriftMeasurement d;
  EvolveOptions opt;
  opt.final_time = final_time;
  opt.dt = dt;
  opt.store_stride = std::numeric_limits<int>::max();
  opt.observers.push_back([&](double, const HfbState& s) {
    d.number = std::max(d.number, std::abs(particle_number(s) - n0) / std::abs(n0));
    d.energy = std::max(d.energy, std::abs(energy(s, m) - e0) / (std::abs(e0) + 1.0));
    d.gamma_hermiticity = std::max(d.gamma_hermiticity, hermiticity_defect(s.gamma));
    d.sigma_symmetry = std::max(d.sigma_symmetry, symmetry_defect(s.sigma));
  });
  evolve(initial, m, opt);
  return d;
}

inline HfbState evolve_to(const HfbState& initial, const HfbModel& m, double final_time, double dt) {
  EvolveOptions opt;
  opt.final_time = final_time;
  opt.dt = dt;
  opt.store_stride = std::numeric_limits<int>::max();
  return evolve(initial, m, opt).states.back();
}

struct PositivityMeasurement {
  /// min over strides of (min eig Gamma_t) / (1 + Tr gamma_t).
  double scaled_floor = 0.0;
  /// min over strides of sigma_bound slack / RHS, summed and split forms.
  double scaled_slack = 0.0;
  double scaled_split_slack = 0.0;
  double gamma_hermiticity = 0.0;
  double sigma_symmetry = 0.0;
};

inline PositivityMeasurement measure_positivity(const HfbState& initial, const HfbModel& m, double final_time,
                                                double dt, int stride) {
  const Kernel sobolev = multiplier_matrix(sobolev_weight(m.grid, 1.0));
  PositivityMeasurement p;
  p.scaled_floor = std::numeric_limits<double>::infinity();
  p.scaled_slack = std::numeric_limits<double>::infinity();
  p.scaled_split_slack = std::numeric_limits<double>::infinity();
  EvolveOptions opt;
  opt.final_time = final_time;
  opt.dt = dt;
  opt.observe_stride = stride;
  opt.store_stride = std::numeric_limits<int>::max();
  opt.observers.push_back([&](double, const HfbState& s) {
    p.scaled_floor = std::min(p.scaled_floor, gamma_floor(s) / (1.0 + gamma_particles(s)));
    const SigmaBound b = sigma_bound(s, sobolev);
    if (b.rhs > 0.0) {
      p.scaled_slack = std::min(p.scaled_slack, b.slack() / b.rhs);
      p.scaled_split_slack = std::min(p.scaled_split_slack, b.split_slack() / b.rhs);
    }
    p.gamma_hermiticity = std::max(p.gamma_hermiticity, hermiticity_defect(s.gamma));
    p.sigma_symmetry = std::max(p.sigma_symmetry, symmetry_defect(s.sigma));
  });
  evolve(initial, m, opt);
  return p;
}

/// Largest k-estimate ratio over a fixed ensemble of random sigma kernels.
inline double max_k_ratio(const HfbModel& m, int samples, std::uint64_t first_seed = 1) {
  const Kernel sobolev = multiplier_matrix(sobolev_weight(m.grid, 1.0));
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Kernel sigma = scenarios::random_sigma(m.grid, first_seed + static_cast<std::uint64_t>(s));
    worst = std::max(worst, k_estimate_ratio(m.pair, sigma, sobolev));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Suites

namespace suites {

inline SuiteReport conservation() {
  SuiteReport r{"conservation", {}, 0.0};
  const HfbModel m = scenarios::interacting_model(32);
  const HfbState s0 = scenarios::coherent_initial(m);
  // The run uses dt = 1e-3; the halving compares it with dt = 5e-4.
  const DriftMeasurement run = measure_drift(s0, m, 1.0, 1e-3);
  const DriftMeasurement halved = measure_drift(s0, m, 1.0, 5e-4);
  r.add("number_drift", run.number, "<", 1e-6);
  r.add("energy_drift", run.energy, "<", 1e-6);
  r.add("number_drift_halving_ratio", run.number / halved.number, ">=", 10.0);
  r.add("energy_drift_halving_ratio", run.energy / halved.energy, ">=", 10.0);
  r.add("gamma_hermiticity_defect", run.gamma_hermiticity, "<", 1e-10);
  r.add("sigma_symmetry_defect", run.sigma_symmetry, "<", 1e-10);

  const double theta = 0.7;
  const HfbState a = evolve_to(gauge_transform(s0, theta), m, 0.5, 1e-3);
  const HfbState b = gauge_transform(evolve_to(s0, m, 0.5, 1e-3), theta);
  r.add("gauge_equivariance_x0", x_distance(a, b, 0), "<", 1e-8);
  return r;
}

inline SuiteReport positivity() {
  SuiteReport r{"positivity", {}, 0.0};
  const HfbModel m = scenarios::interacting_model(32);
  const HfbState s0 = scenarios::squeezed_thermal_initial(m);
  r.add("initial_gamma_floor", gamma_floor(s0), ">=", -1e-12);
  const PositivityMeasurement p = measure_positivity(s0, m, 1.0, 1e-3, 10);
  r.add("min_scaled_gamma_floor", p.scaled_floor, ">=", -1e-8);
  r.add("gamma_hermiticity_defect", p.gamma_hermiticity, "<", 1e-10);
  r.add("sigma_symmetry_defect", p.sigma_symmetry, "<", 1e-10);
  return r;
}

inline SuiteReport free_flow() {
  SuiteReport r{"free-flow", {}, 0.0};
  const HfbModel m = scenarios::free_model(32);
  const HfbState s0 = random_band_limited_state(m.grid, 77, 2, 0.3, 0.4, 1.0);
  const HfbState rk = evolve_to(s0, m, 1.0, 1e-3);
  r.add("x0_error_vs_oracle", x_distance(rk, oracle::free_flow(s0, 1.0, m.one_body), 0), "<", 1e-8);
  return r;
}

inline SuiteReport order() {
  SuiteReport r{"order", {}, 0.0};
  const HfbModel m = scenarios::interacting_model(32);
  const HfbState s0 = scenarios::coherent_initial(m);
  const auto est = oracle::order_study([&](double dt) { return evolve_to(s0, m, 1.0, dt); }, {4e-3, 2e-3, 1e-3});
  r.add("fitted_order", est.order, ">=", 3.5);
  r.add("errors_monotone", est.monotone ? 1.0 : 0.0, ">=", 1.0);
  return r;
}

inline SuiteReport picard() {
  SuiteReport r{"picard", {}, 0.0};
  const HfbModel m = scenarios::interacting_model(8);
  const HfbState s0 = random_band_limited_state(m.grid, 5, 2, 0.3, 0.4, 2.0);
  const MildResult mild = picard_mild(s0, m, 0.05, 1e-3, 12);
  const HfbState rk = evolve_to(s0, m, 0.05, 1e-5);
  r.add("iterations", mild.iterations, ">=", 5.0);
  r.add("contraction_factor", mild.contraction_factor, "<", 1.0);
  r.add("x0_distance_to_rk4", x_distance(mild.state, rk, 0), "<", 1e-6);
  return r;
}

inline SuiteReport bogoliubov() {
  SuiteReport r{"bogoliubov", {}, 0.0};
  const HfbModel m = scenarios::interacting_model(16);
  EvolveOptions opt;
  opt.final_time = 0.5;
  // Stamps every 5e-4 keep the linear interpolation of the generator well
  // below the reconstruction threshold.
  opt.dt = 5e-4;
  const Trajectory traj = evolve(scenarios::coherent_initial(m), m, opt);
  const BogoliubovReport rep = bogoliubov_check(traj, m);
  r.add("symplectic_defect", rep.max_symplectic_defect(), "<", 1e-8);
  r.add("reconstruction_defect", rep.max_reconstruction_defect(), "<", 1e-6);
  return r;
}

inline SuiteReport inequalities() {
  SuiteReport r{"inequalities", {}, 0.0};
  const HfbModel m = scenarios::interacting_model(32);
  const PositivityMeasurement p = measure_positivity(scenarios::squeezed_thermal_initial(m), m, 1.0, 1e-3, 10);
  r.add("min_scaled_sigma_bound_slack", p.scaled_slack, ">=", -1e-8);
  r.add("min_scaled_split_sigma_bound_slack", p.scaled_split_slack, ">=", -1e-8);
  const double coarse = max_k_ratio(scenarios::interacting_model(16), 50);
  const double fine = max_k_ratio(scenarios::interacting_model(64), 50);
  r.add("k_ratio_n16", coarse, ">=", 0.0);
  r.add("k_ratio_n64_over_n16", fine / coarse, "<=", 1.5);
  return r;
}

}  // namespace suites

inline const std::map<std::string, std::function<SuiteReport()>>& suite_table() {
  static const std::map<std::string, std::function<SuiteReport()>> table{
      {"conservation", suites::conservation}, {"positivity", suites::positivity},
      {"free-flow", suites::free_flow},       {"order", suites::order},
      {"picard", suites::picard},             {"bogoliubov", suites::bogoliubov},
      {"inequalities", suites::inequalities}};
  return table;
}

/// Runs one suite by name; throws InvalidArgument for unknown names.
inline SuiteReport run_suite(const std::string& name) {
  const auto& table = suite_table();
  const auto it = table.find(name);
  if (it == table.end()) throw InvalidArgument("unknown verification suite '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  SuiteReport r = it->second();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace hfb
