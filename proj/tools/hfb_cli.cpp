// hfb: command-line driver.
//
//   hfb run --config <path> --out <dir> [--seed <u64>]
//   hfb verify --suite <name>
//   hfb snapshot-info <file>
//
// Exit codes: 0 ok, 2 config error, 3 numerical abort, 4 invariant violation.

#include <iostream>

#include <CLI11.hpp>

#include "hfb/run.hpp"
#include "hfb/verify.hpp"

namespace {

int do_run(const std::string& config_path, const std::string& out_dir, const std::optional<std::uint64_t>& seed) {
  hfb::RunConfig config;
  try {
    config = hfb::load_config(config_path);
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (config.output_dir.empty()) throw hfb::ConfigError("missing config field 'output.dir' (or pass --out)");
    const hfb::RunResult result = hfb::run_simulation(config, config.output_dir);
    std::cout << result.message;
    if (result.free_flow_deviation)
      std::cout << "free-flow max deviation (X0): " << hfb::format_double(*result.free_flow_deviation) << '\n';
    if (result.code != hfb::ExitCode::Ok) std::cerr << "run aborted at t=" << hfb::format_double(result.final_time) << '\n';
    return static_cast<int>(result.code);
  } catch (const hfb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(hfb::ExitCode::ConfigError);
  } catch (const hfb::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(hfb::ExitCode::ConfigError);
  } catch (const hfb::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return static_cast<int>(hfb::ExitCode::NumericalAbort);
  }
}

int do_verify(const std::string& suite) {
  hfb::SuiteReport report;
  try {
    report = hfb::run_suite(suite);
  } catch (const hfb::InvalidArgument& e) {
    std::cerr << e.what() << '\n';
    return static_cast<int>(hfb::ExitCode::ConfigError);
  } catch (const hfb::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return static_cast<int>(hfb::ExitCode::NumericalAbort);
  }
  std::cout << "suite,check,value,relation,threshold,status\n";
  hfb::write_report(std::cout, report);
  std::cout << "# " << suite << (report.passed() ? " passed" : " FAILED") << " in "
            << hfb::format_double(report.seconds) << " s\n";
  return report.passed() ? 0 : static_cast<int>(hfb::ExitCode::InvariantViolation);
}

int do_snapshot_info(const std::string& path) {
  try {
    const hfb::HfbState s = hfb::read_snapshot(path);
    const auto v = hfb::validate(s, 1e-8);
    std::cout << "d = " << s.grid.dimension() << '\n'
              << "n = " << s.grid.points_per_axis() << '\n'
              << "L = " << hfb::format_double(s.grid.side_length()) << '\n'
              << "N_gamma = " << hfb::format_double(hfb::gamma_particles(s)) << '\n'
              << "N_phi = " << hfb::format_double(hfb::condensate_particles(s)) << '\n'
              << "N_total = " << hfb::format_double(hfb::particle_number(s)) << '\n'
              << "min_eig_Gamma = " << hfb::format_double(hfb::gamma_floor(s)) << '\n'
              << "gamma_hermiticity_defect = " << hfb::format_double(hfb::hermiticity_defect(s.gamma)) << '\n'
              << "sigma_symmetry_defect = " << hfb::format_double(hfb::symmetry_defect(s.sigma)) << '\n'
              << "valid = " << (v.valid() ? "true" : "false") << '\n';
    return 0;
  } catch (const hfb::Error& e) {
    std::cerr << "snapshot error: " << e.what() << '\n';
    return static_cast<int>(hfb::ExitCode::ConfigError);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent Hartree-Fock-Bogoliubov simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "integrate one configuration and write diagnostics");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  run->add_option("--config", config_path, "run configuration file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed for randomized initial data");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  verify->add_option("--suite", suite, "conservation | positivity | free-flow | order | picard | bogoliubov | inequalities")
      ->required();

  auto* info = app.add_subcommand("snapshot-info", "print a summary of a snapshot file");
  std::string snapshot;
  info->add_option("file", snapshot, "snapshot path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(hfb::ExitCode::ConfigError);
  }
  if (*run) return do_run(config_path, out_dir, seed);
  if (*verify) return do_verify(suite);
  return do_snapshot_info(snapshot);
}
