#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "hfb/run.hpp"

using namespace hfb;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(HFB_SOURCE_DIR) + "/configs";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string config_text(const std::string& name) { return slurp(kConfigs + "/" + name); }

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
  const std::regex re("(^|\n)" + std::regex_replace(key, std::regex(R"(\.)"), R"(\.)") + R"( = [^\n]*)");
  return std::regex_replace(text, re, "$1" + line);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hfb_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Outcome {
  int code;
  std::string out;
};

Outcome cli(const std::string& args, const fs::path& log_dir) {
  const fs::path log = log_dir / "cli.log";
  const std::string cmd = std::string(HFB_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

std::string config_error_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ShippedConfigsRoundTrip) {
  for (const char* name : {"conservation.cfg", "squeezed_thermal.cfg", "free_flow.cfg", "vacuum.cfg"}) {
    const RunConfig c = parse_config(config_text(name));
    const std::string canonical = serialize_config(c);
    EXPECT_TRUE(parse_config(canonical) == c) << name;
    EXPECT_EQ(serialize_config(parse_config(canonical)), canonical) << name;
  }
}

TEST(Config, ConservationConfigFields) {
  const RunConfig c = parse_config(config_text("conservation.cfg"));
  EXPECT_EQ(c.d, 1);
  EXPECT_EQ(c.n, 32);
  EXPECT_EQ(c.pair.kind, FieldKind::Gaussian);
  EXPECT_EQ(c.pair.amplitude, 0.5);
  EXPECT_EQ(c.initial.kind, InitialKind::Coherent);
  EXPECT_EQ(c.initial.norm, 2.0);
  EXPECT_EQ(c.dt, 1e-3);
  EXPECT_EQ(c.stride, 10);
  EXPECT_FALSE(c.seed.has_value());
}

TEST(Config, MissingFieldIsNamed) {
  const std::string text = std::regex_replace(config_text("conservation.cfg"), std::regex("grid.n = 32\n"), "");
  EXPECT_NE(config_error_message(text).find("missing config field 'grid.n'"), std::string::npos);
}

TEST(Config, RejectsUnknownDuplicateAndMalformedKeys) {
  const std::string base = config_text("vacuum.cfg");
  EXPECT_NE(config_error_message(base + "grid.spacing = 3\n").find("grid.spacing"), std::string::npos);
  EXPECT_NE(config_error_message(base + "grid.n = 8\n").find("duplicate"), std::string::npos);
  EXPECT_NE(config_error_message(base + "gridn = 8\n").find("section.name"), std::string::npos);
  EXPECT_NE(config_error_message(base + "grid.n.x = 8\n").find("section.name"), std::string::npos);
  EXPECT_NE(config_error_message(base + "no equals sign\n").find("key = value"), std::string::npos);
}

TEST(Config, RejectsBadValues) {
  const std::string base = config_text("vacuum.cfg");
  EXPECT_FALSE(config_error_message(replace_line(base, "grid.n", "grid.n = 12")).empty());
  EXPECT_FALSE(config_error_message(replace_line(base, "grid.L", "grid.L = -1")).empty());
  EXPECT_FALSE(config_error_message(replace_line(base, "integrator.dt", "integrator.dt = abc")).empty());
  EXPECT_FALSE(config_error_message(replace_line(base, "integrator.scheme", "integrator.scheme = euler")).empty());
  EXPECT_FALSE(config_error_message(replace_line(base, "pair.kind", "pair.kind = plane_wave")).empty());
}

TEST(Cli, VacuumRunHasZeroDiagnostics) {
  const fs::path dir = scratch("vacuum");
  const Outcome r = cli("run --config " + kConfigs + "/vacuum.cfg --out " + dir.string(), dir);
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream csv(dir / "diagnostics.csv");
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    const std::string rest = line.substr(line.find(','));
    EXPECT_EQ(rest, ",0,0,0,0,0,0,0,0,0,0") << line;
  }
  EXPECT_EQ(rows, 11);
  for (const char* f : {"initial.hfb", "final.hfb", "manifest.txt"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
}

TEST(Cli, FreeFlowConfigMatchesExactFlow) {
  const fs::path dir = scratch("free_flow");
  const Outcome r = cli("run --config " + kConfigs + "/free_flow.cfg --out " + dir.string(), dir);
  ASSERT_EQ(r.code, 0) << r.out;
  std::smatch m;
  const std::string manifest = slurp(dir / "manifest.txt");
  ASSERT_TRUE(std::regex_search(manifest, m, std::regex(R"(run\.free_flow_deviation = (\S+))")));
  EXPECT_LT(std::stod(m[1]), 1e-8);
  EXPECT_NE(manifest.find("run.build = "), std::string::npos);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::string text = replace_line(config_text("squeezed_thermal.cfg"), "integrator.T", "integrator.T = 0.1");
  const fs::path a = scratch("repeat_a");
  const fs::path b = scratch("repeat_b");
  const fs::path cfg = write_config(a, text);
  ASSERT_EQ(cli("run --config " + cfg.string() + " --out " + a.string(), a).code, 0);
  ASSERT_EQ(cli("run --config " + cfg.string() + " --out " + b.string(), b).code, 0);
  EXPECT_EQ(slurp(a / "diagnostics.csv"), slurp(b / "diagnostics.csv"));
  EXPECT_EQ(slurp(a / "final.hfb"), slurp(b / "final.hfb"));
}

TEST(Cli, SeedChangesRandomInitialData) {
  const fs::path a = scratch("seed_a");
  const fs::path b = scratch("seed_b");
  const std::string cfg = kConfigs + "/free_flow.cfg";
  ASSERT_EQ(cli("run --config " + cfg + " --out " + a.string() + " --seed 1", a).code, 0);
  ASSERT_EQ(cli("run --config " + cfg + " --out " + b.string() + " --seed 2", b).code, 0);
  EXPECT_NE(slurp(a / "initial.hfb"), slurp(b / "initial.hfb"));
}

TEST(Cli, ConfigErrorsExitWithTwo) {
  const fs::path dir = scratch("config_errors");
  EXPECT_EQ(cli("run --config " + (dir / "absent.cfg").string() + " --out " + dir.string(), dir).code, 2);
  const fs::path bad = write_config(dir, config_text("vacuum.cfg") + "grid.bogus = 1\n");
  const Outcome r = cli("run --config " + bad.string() + " --out " + dir.string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("grid.bogus"), std::string::npos);
  EXPECT_EQ(cli("run", dir).code, 2);
  EXPECT_EQ(cli("frobnicate", dir).code, 2);
}

TEST(Cli, BlowUpExitsWithThree) {
  const fs::path dir = scratch("blow_up");
  std::string text = config_text("conservation.cfg");
  text = replace_line(text, "integrator.dt", "integrator.dt = 0.5");
  text = replace_line(text, "integrator.T", "integrator.T = 500");
  text = replace_line(text, "integrator.stride", "integrator.stride = 100000");
  const Outcome r = cli("run --config " + write_config(dir, text).string() + " --out " + dir.string(), dir);
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("non-finite"), std::string::npos);
  // The last finite state is still written.
  EXPECT_TRUE(all_finite(read_snapshot((dir / "final.hfb").string())));
}

TEST(Cli, PositivityBreachExitsWithFour) {
  const fs::path dir = scratch("breach");
  std::string text = config_text("squeezed_thermal.cfg");
  text = replace_line(text, "integrator.dt", "integrator.dt = 0.05");
  text = replace_line(text, "integrator.T", "integrator.T = 5");
  text = replace_line(text, "integrator.stride", "integrator.stride = 1");
  const Outcome r = cli("run --config " + write_config(dir, text).string() + " --out " + dir.string(), dir);
  EXPECT_EQ(r.code, 4) << r.out;
  EXPECT_NE(r.out.find("positivity violated"), std::string::npos);
  EXPECT_NE(slurp(dir / "manifest.txt").find("run.exit_code = 4"), std::string::npos);
}

TEST(Cli, VerifyUnknownSuiteExitsWithTwo) {
  const fs::path dir = scratch("verify");
  EXPECT_EQ(cli("verify --suite unknown", dir).code, 2);
}

TEST(Cli, VerifyFreeFlowSuitePasses) {
  const fs::path dir = scratch("verify_free");
  const Outcome r = cli("verify --suite free-flow", dir);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("free-flow passed"), std::string::npos);
}

TEST(Cli, SnapshotInfo) {
  const fs::path dir = scratch("snapshot_info");
  ASSERT_EQ(cli("run --config " + kConfigs + "/squeezed_thermal.cfg --out " + dir.string(), dir).code, 0);
  const Outcome r = cli("snapshot-info " + (dir / "initial.hfb").string(), dir);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n = 32"), std::string::npos);
  EXPECT_NE(r.out.find("valid = true"), std::string::npos);
  std::ofstream(dir / "junk.hfb") << "not a snapshot";
  EXPECT_EQ(cli("snapshot-info " + (dir / "junk.hfb").string(), dir).code, 2);
}
