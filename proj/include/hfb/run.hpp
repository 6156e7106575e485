#pragma once

// Batch driver behind `hfb run`: builds the model and the initial state from a
// RunConfig, integrates, and writes
//   diagnostics.csv   one DiagnosticsRecord per stride (and at t = 0, T)
//   initial.hfb       initial state snapshot
//   final.hfb         last state reached (the last valid one after an abort)
//   manifest.txt      config echo, build identifier, outcome, wall time
// Only the manifest carries wall-clock data, so the other files are
// byte-identical across repeated runs of one config.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "hfb/config.hpp"
#include "hfb/dynamics.hpp"
#include "hfb/oracle.hpp"
#include "hfb/snapshot.hpp"

#ifndef HFB_BUILD_ID
#define HFB_BUILD_ID "unversioned"
#endif

namespace hfb {

enum class ExitCode : int { Ok = 0, ConfigError = 2, NumericalAbort = 3, InvariantViolation = 4 };

inline const char* build_identifier() { return HFB_BUILD_ID; }

/// splitmix64 finalizer, used to combine the run seed with per-field seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline TorusGrid config_grid(const RunConfig& c) { return make_grid(c.d, c.length, c.n); }

inline HfbModel build_model(const RunConfig& c) {
  const TorusGrid grid = config_grid(c);
  try {
    return make_model(grid, c.potential, c.pair);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("potential/pair: ") + e.what());
  }
}

inline ComplexField build_phi(const RunConfig& c, const TorusGrid& grid) {
  if (!c.phi) return ComplexField::Zero(grid.size());
  FieldSpec spec = *c.phi;
  if (spec.kind == FieldKind::Random && c.seed) spec.seed = mix_seed(*c.seed, spec.seed);
  ComplexField phi;
  try {
    phi = sample_field(grid, spec);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("phi: ") + e.what());
  }
  if (c.initial.norm > 0.0) {
    const double current = grid.weight() * phi.squaredNorm();
    if (!(current > 0.0)) throw ConfigError("initial.norm: cannot normalize a vanishing phi");
    phi *= std::sqrt(c.initial.norm / current);
  }
  return phi;
}

inline HfbState build_initial_state(const RunConfig& c, const HfbModel& m) {
  const TorusGrid& grid = m.grid;
  switch (c.initial.kind) {
    case InitialKind::Vacuum:
      return vacuum_state(grid);
    case InitialKind::Coherent:
      return coherent_state(grid, build_phi(c, grid));
    case InitialKind::SqueezedThermal: {
      SqueezeParameters sq{c.initial.squeeze, c.initial.squeeze_phase, c.initial.mu};
      try {
        return squeezed_thermal_state(grid, m.one_body, c.initial.beta, sq, build_phi(c, grid));
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("initial: ") + e.what());
      }
    }
    case InitialKind::Random: {
      const std::uint64_t seed = c.seed ? mix_seed(*c.seed, 0) : 0;
      try {
        return random_band_limited_state(grid, seed, c.initial.cutoff, c.initial.occupation, c.initial.max_squeeze,
                                         c.initial.norm);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("initial: ") + e.what());
      }
    }
    case InitialKind::Snapshot: {
      HfbState s;
      try {
        s = read_snapshot(c.initial.path);
      } catch (const Error& e) {
        throw ConfigError(std::string("initial.path: ") + e.what());
      }
      if (!(s.grid == grid)) throw ConfigError("initial.path: snapshot grid differs from grid.* settings");
      return s;
    }
  }
  return vacuum_state(grid);
}

struct RunResult {
  ExitCode code = ExitCode::Ok;
  std::string message;
  double final_time = 0.0;
  HfbState final_state;
  std::vector<DiagnosticsRecord> records;
  std::optional<double> free_flow_deviation;
};

/// Runs one configuration and writes its artifacts into out_dir. Config
/// errors are thrown as ConfigError before anything is written; numerical and
/// invariant aborts are reported through RunResult::code after the artifacts
/// of the valid part of the run are on disk.
inline RunResult run_simulation(const RunConfig& config, const std::filesystem::path& out_dir) {
  const auto wall_start = std::chrono::steady_clock::now();
  const HfbModel model = build_model(config);
  const HfbState initial = build_initial_state(config, model);
  const double v_size = model.pair.matrix.size() ? model.pair.matrix.cwiseAbs().maxCoeff() : 0.0;
  if (config.check_free_flow && v_size != 0.0) throw ConfigError("check.free_flow requires a vanishing pair potential");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream csv(out_dir / "diagnostics.csv");
  if (!csv) throw ConfigError("output directory '" + out_dir.string() + "' is not writable");
  write_snapshot((out_dir / "initial.hfb").string(), initial);
  write_csv_header(csv);

  RunResult result;
  result.final_state = initial;
  const DiagnosticsContext ctx(model);
  const double tol = config.positivity_tol;
  HfbState last_checked = initial;
  double last_checked_time = 0.0;

  struct PositivityBreach {
    double t;
    double floor;
    double bound;
  };

  EvolveOptions opt;
  opt.final_time = config.final_time;
  opt.dt = config.dt;
  opt.scheme = scheme_from_string(config.scheme);
  opt.observe_stride = config.stride;
  opt.store_stride = std::numeric_limits<int>::max();
  opt.observers.push_back([&](double t, const HfbState& s) {
    const DiagnosticsRecord r = record(s, t, ctx);
    write_csv_row(csv, r);
    result.records.push_back(r);
    const double bound = -tol * (1.0 + r.n_gamma);
    if (r.min_eig_gamma_matrix < bound) throw PositivityBreach{t, r.min_eig_gamma_matrix, bound};
    last_checked = s;
    last_checked_time = t;
  });

  try {
    const Trajectory traj = evolve(initial, model, opt);
    result.final_state = traj.states.back();
    result.final_time = traj.times.back();
    for (const auto& w : traj.warnings) result.message += "warning: " + w + "\n";
  } catch (const PositivityBreach& b) {
    result.code = ExitCode::InvariantViolation;
    result.message = "positivity violated at t=" + format_double(b.t) + ": min eig Gamma = " + format_double(b.floor) +
                     " < " + format_double(b.bound) + "\n";
    result.final_state = last_checked;
    result.final_time = last_checked_time;
  } catch (const IntegrationAborted& e) {
    result.code = ExitCode::NumericalAbort;
    result.message = std::string(e.what()) + "\n";
    result.final_state = e.last_valid;
    result.final_time = e.last_time;
  } catch (const NumericalError& e) {
    result.code = ExitCode::NumericalAbort;
    result.message = std::string(e.what()) + "\n";
    result.final_state = last_checked;
    result.final_time = last_checked_time;
  }
  csv.close();
  write_snapshot((out_dir / "final.hfb").string(), result.final_state);

  if (config.check_free_flow && result.code == ExitCode::Ok) {
    const HfbState exact = oracle::free_flow(initial, result.final_time, model.one_body);
    result.free_flow_deviation = x_distance(result.final_state, exact, 0);
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  std::ofstream manifest(out_dir / "manifest.txt");
  manifest << "# config\n" << serialize_config(config) << "# run\n"
           << "run.build = " << build_identifier() << '\n'
           << "run.exit_code = " << static_cast<int>(result.code) << '\n'
           << "run.final_time = " << format_double(result.final_time) << '\n'
           << "run.records = " << result.records.size() << '\n';
  if (result.free_flow_deviation)
    manifest << "run.free_flow_deviation = " << format_double(*result.free_flow_deviation) << '\n';
  manifest << "run.wall_seconds = " << format_double(wall) << '\n';
  return result;
}

}  // namespace hfb
