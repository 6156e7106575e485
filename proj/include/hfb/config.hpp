#pragma once

// Run configuration: flat "section.key = value" text, one entry per line,
// '#' starts a comment. Sections:
//
//   grid        d, L, n
//   potential   external potential V (field keys below, real valued)
//   pair        pair potential v (field keys below, real and even)
//   phi         condensate field for coherent / squeezed-thermal initial data
//   initial     kind = vacuum | coherent | squeezed-thermal | random | snapshot
//               norm, beta, mu, squeeze, squeeze_phase, cutoff, occupation,
//               max_squeeze, path
//   integrator  scheme, dt, T, stride
//   output      dir
//   run         seed
//   check       free_flow, positivity_tol
//
// Field keys: kind, amplitude, width, center, wave, values, cutoff, seed.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hfb/dynamics.hpp"
#include "hfb/field.hpp"
#include "hfb/observables.hpp"

namespace hfb {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class InitialKind { Vacuum, Coherent, SqueezedThermal, Random, Snapshot };

inline InitialKind initial_kind_from_string(const std::string& name) {
  if (name == "vacuum") return InitialKind::Vacuum;
  if (name == "coherent") return InitialKind::Coherent;
  if (name == "squeezed-thermal") return InitialKind::SqueezedThermal;
  if (name == "random") return InitialKind::Random;
  if (name == "snapshot") return InitialKind::Snapshot;
  throw ConfigError("initial.kind: unknown value '" + name + "'");
}

inline std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Vacuum: return "vacuum";
    case InitialKind::Coherent: return "coherent";
    case InitialKind::SqueezedThermal: return "squeezed-thermal";
    case InitialKind::Random: return "random";
    case InitialKind::Snapshot: return "snapshot";
  }
  return "vacuum";
}

struct InitialSpec {
  InitialKind kind = InitialKind::Vacuum;
  /// Rescale phi so that ||phi||^2 equals this value (0 keeps phi as sampled).
  double norm = 0.0;
  double beta = 1.0;
  double mu = 0.0;
  std::vector<double> squeeze;
  std::vector<double> squeeze_phase;
  int cutoff = 2;
  double occupation = 0.3;
  double max_squeeze = 0.4;
  std::string path;

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct RunConfig {
  int d = 1;
  double length = 0.0;
  int n = 0;
  FieldSpec potential;
  FieldSpec pair;
  std::optional<FieldSpec> phi;
  InitialSpec initial;
  std::string scheme = "rk4";
  double dt = 0.0;
  double final_time = 0.0;
  int stride = 1;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  bool check_free_flow = false;
  double positivity_tol = 1e-8;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline bool fields_equal(const FieldSpec& a, const FieldSpec& b) {
  return a.kind == b.kind && a.amplitude == b.amplitude && a.width == b.width && a.center == b.center &&
         a.wave == b.wave && a.table == b.table && a.cutoff == b.cutoff && a.seed == b.seed;
}

/// Typed access to the raw key/value map; remembers which keys were read so
/// that unknown keys can be reported.
class ConfigReader {
 public:
  explicit ConfigReader(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key) {
    used_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config field '" + key + "'");
    return it->second;
  }

  double real(const std::string& key) {
    const std::string v = text(key);
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("config field '" + key + "': expected a number, got '" + v + "'");
  }

  long long integer(const std::string& key) {
    const std::string v = text(key);
    try {
      std::size_t pos = 0;
      const long long x = std::stoll(v, &pos);
      if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("config field '" + key + "': expected an integer, got '" + v + "'");
  }

  std::uint64_t unsigned64(const std::string& key) {
    const std::string v = text(key);
    try {
      std::size_t pos = 0;
      if (!v.empty() && v[0] != '-') {
        const unsigned long long x = std::stoull(v, &pos);
        if (pos == v.size()) return x;
      }
    } catch (const std::exception&) {
    }
    throw ConfigError("config field '" + key + "': expected an unsigned integer, got '" + v + "'");
  }

  bool boolean(const std::string& key) {
    const std::string v = text(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config field '" + key + "': expected true or false, got '" + v + "'");
  }

  std::vector<double> reals(const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(text(key))) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': bad list entry '" + item + "'");
      }
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_)
      if (!used_.count(key)) throw ConfigError("unknown config field '" + key + "'");
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

template <typename T, std::size_t N>
std::array<T, N> fixed_list(const std::string& key, const std::vector<double>& values) {
  if (values.empty() || values.size() > N) throw ConfigError("config field '" + key + "': expected 1 to " + std::to_string(N) + " entries");
  std::array<T, N> out{};
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<T>(values[i]);
  return out;
}

inline FieldSpec read_field(ConfigReader& r, const std::string& section) {
  FieldSpec f;
  const std::string p = section + ".";
  try {
    f.kind = field_kind_from_string(r.text(p + "kind"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(p + "kind: " + e.what());
  }
  switch (f.kind) {
    case FieldKind::Constant:
      f.amplitude = r.has(p + "amplitude") ? r.real(p + "amplitude") : 0.0;
      break;
    case FieldKind::Cosine:
    case FieldKind::PlaneWave:
      f.amplitude = r.real(p + "amplitude");
      f.wave = fixed_list<int, 3>(p + "wave", r.reals(p + "wave"));
      break;
    case FieldKind::Gaussian:
      f.amplitude = r.real(p + "amplitude");
      f.width = r.real(p + "width");
      if (!(f.width > 0.0)) throw ConfigError(p + "width must be positive");
      if (r.has(p + "center")) f.center = fixed_list<double, 3>(p + "center", r.reals(p + "center"));
      break;
    case FieldKind::Table:
      for (double v : r.reals(p + "values")) f.table.emplace_back(v, 0.0);
      break;
    case FieldKind::Random:
      f.amplitude = r.has(p + "amplitude") ? r.real(p + "amplitude") : 1.0;
      f.cutoff = static_cast<int>(r.integer(p + "cutoff"));
      if (r.has(p + "seed")) f.seed = r.unsigned64(p + "seed");
      break;
  }
  return f;
}

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out;
}

inline void write_field(std::ostream& out, const std::string& section, const FieldSpec& f) {
  const std::string p = section + ".";
  out << p << "kind = " << to_string(f.kind) << '\n';
  switch (f.kind) {
    case FieldKind::Constant:
      out << p << "amplitude = " << format_double(f.amplitude) << '\n';
      break;
    case FieldKind::Cosine:
    case FieldKind::PlaneWave:
      out << p << "amplitude = " << format_double(f.amplitude) << '\n';
      out << p << "wave = " << f.wave[0] << ", " << f.wave[1] << ", " << f.wave[2] << '\n';
      break;
    case FieldKind::Gaussian:
      out << p << "amplitude = " << format_double(f.amplitude) << '\n';
      out << p << "width = " << format_double(f.width) << '\n';
      out << p << "center = " << join({f.center.begin(), f.center.end()}) << '\n';
      break;
    case FieldKind::Table: {
      std::vector<double> re;
      for (const auto& c : f.table) re.push_back(c.real());
      out << p << "values = " << join(re) << '\n';
      break;
    }
    case FieldKind::Random:
      out << p << "amplitude = " << format_double(f.amplitude) << '\n';
      out << p << "cutoff = " << f.cutoff << '\n';
      out << p << "seed = " << f.seed << '\n';
      break;
  }
}

}  // namespace detail

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  const auto same_phi = [&] {
    if (a.phi.has_value() != b.phi.has_value()) return false;
    return !a.phi || detail::fields_equal(*a.phi, *b.phi);
  };
  return a.d == b.d && a.length == b.length && a.n == b.n && detail::fields_equal(a.potential, b.potential) &&
         detail::fields_equal(a.pair, b.pair) && same_phi() && a.initial == b.initial && a.scheme == b.scheme &&
         a.dt == b.dt && a.final_time == b.final_time && a.stride == b.stride && a.output_dir == b.output_dir &&
         a.seed == b.seed && a.check_free_flow == b.check_free_flow && a.positivity_tol == b.positivity_tol;
}

/// Splits text into key/value pairs; rejects malformed lines and duplicates.
inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos)
      throw ConfigError("config line " + std::to_string(number) + ": key '" + key + "' must look like section.name");
    if (!out.emplace(key, value).second) throw ConfigError("duplicate config field '" + key + "'");
  }
  return out;
}

inline RunConfig parse_config(const std::string& text) {
  detail::ConfigReader r(parse_key_values(text));
  RunConfig c;
  c.d = static_cast<int>(r.integer("grid.d"));
  c.length = r.real("grid.L");
  c.n = static_cast<int>(r.integer("grid.n"));
  if (c.d < 1 || c.d > 3) throw ConfigError("grid.d must be 1, 2 or 3");
  if (!(c.length > 0.0)) throw ConfigError("grid.L must be positive");
  if (c.n < 4 || (c.n & (c.n - 1)) != 0) throw ConfigError("grid.n must be a power of two >= 4");

  c.potential = detail::read_field(r, "potential");
  if (c.potential.kind == FieldKind::PlaneWave || c.potential.kind == FieldKind::Random)
    throw ConfigError("potential.kind must describe a real field");
  c.pair = detail::read_field(r, "pair");
  if (c.pair.kind == FieldKind::PlaneWave || c.pair.kind == FieldKind::Random)
    throw ConfigError("pair.kind must describe a real even field");

  c.initial.kind = initial_kind_from_string(r.text("initial.kind"));
  switch (c.initial.kind) {
    case InitialKind::Vacuum:
      break;
    case InitialKind::Coherent:
      c.phi = detail::read_field(r, "phi");
      break;
    case InitialKind::SqueezedThermal:
      c.initial.beta = r.real("initial.beta");
      c.initial.mu = r.real("initial.mu");
      if (!(c.initial.beta > 0.0)) throw ConfigError("initial.beta must be positive");
      if (r.has("initial.squeeze")) c.initial.squeeze = r.reals("initial.squeeze");
      if (r.has("initial.squeeze_phase")) c.initial.squeeze_phase = r.reals("initial.squeeze_phase");
      if (r.has("phi.kind")) c.phi = detail::read_field(r, "phi");
      break;
    case InitialKind::Random:
      c.initial.cutoff = static_cast<int>(r.integer("initial.cutoff"));
      if (r.has("initial.occupation")) c.initial.occupation = r.real("initial.occupation");
      if (r.has("initial.max_squeeze")) c.initial.max_squeeze = r.real("initial.max_squeeze");
      if (c.initial.cutoff < 0) throw ConfigError("initial.cutoff must be nonnegative");
      break;
    case InitialKind::Snapshot:
      c.initial.path = r.text("initial.path");
      break;
  }
  if (c.initial.kind != InitialKind::Vacuum && c.initial.kind != InitialKind::Snapshot && r.has("initial.norm")) {
    c.initial.norm = r.real("initial.norm");
    if (c.initial.norm < 0.0) throw ConfigError("initial.norm must be nonnegative");
  }

  c.scheme = r.text("integrator.scheme");
  try {
    scheme_from_string(c.scheme);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("integrator.scheme: ") + e.what());
  }
  c.dt = r.real("integrator.dt");
  c.final_time = r.real("integrator.T");
  c.stride = static_cast<int>(r.integer("integrator.stride"));
  if (!(c.dt > 0.0)) throw ConfigError("integrator.dt must be positive");
  if (!(c.final_time > 0.0)) throw ConfigError("integrator.T must be positive");
  if (c.dt > c.final_time) throw ConfigError("integrator.dt must not exceed integrator.T");
  if (c.stride < 1) throw ConfigError("integrator.stride must be >= 1");

  if (r.has("output.dir")) c.output_dir = r.text("output.dir");
  if (r.has("run.seed")) c.seed = r.unsigned64("run.seed");
  if (r.has("check.free_flow")) c.check_free_flow = r.boolean("check.free_flow");
  if (r.has("check.positivity_tol")) {
    c.positivity_tol = r.real("check.positivity_tol");
    if (!(c.positivity_tol >= 0.0)) throw ConfigError("check.positivity_tol must be nonnegative");
  }
  r.reject_unknown();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "grid.d = " << c.d << '\n'
      << "grid.L = " << format_double(c.length) << '\n'
      << "grid.n = " << c.n << '\n';
  detail::write_field(out, "potential", c.potential);
  detail::write_field(out, "pair", c.pair);
  if (c.phi) detail::write_field(out, "phi", *c.phi);
  const InitialSpec& i = c.initial;
  out << "initial.kind = " << to_string(i.kind) << '\n';
  switch (i.kind) {
    case InitialKind::Vacuum:
      break;
    case InitialKind::Coherent:
      break;
    case InitialKind::SqueezedThermal:
      out << "initial.beta = " << format_double(i.beta) << '\n' << "initial.mu = " << format_double(i.mu) << '\n';
      if (!i.squeeze.empty()) out << "initial.squeeze = " << detail::join(i.squeeze) << '\n';
      if (!i.squeeze_phase.empty()) out << "initial.squeeze_phase = " << detail::join(i.squeeze_phase) << '\n';
      break;
    case InitialKind::Random:
      out << "initial.cutoff = " << i.cutoff << '\n'
          << "initial.occupation = " << format_double(i.occupation) << '\n'
          << "initial.max_squeeze = " << format_double(i.max_squeeze) << '\n';
      break;
    case InitialKind::Snapshot:
      out << "initial.path = " << i.path << '\n';
      break;
  }
  if (i.kind != InitialKind::Vacuum && i.kind != InitialKind::Snapshot)
    out << "initial.norm = " << format_double(i.norm) << '\n';
  out << "integrator.scheme = " << c.scheme << '\n'
      << "integrator.dt = " << format_double(c.dt) << '\n'
      << "integrator.T = " << format_double(c.final_time) << '\n'
      << "integrator.stride = " << c.stride << '\n';
  if (!c.output_dir.empty()) out << "output.dir = " << c.output_dir << '\n';
  if (c.seed) out << "run.seed = " << *c.seed << '\n';
  out << "check.free_flow = " << (c.check_free_flow ? "true" : "false") << '\n'
      << "check.positivity_tol = " << format_double(c.positivity_tol) << '\n';
  return out.str();
}

}  // namespace hfb
