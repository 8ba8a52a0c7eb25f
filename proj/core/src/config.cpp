#include "cxsplit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cxsplit/errors.hpp"
#include "cxsplit/harness.hpp"
#include "cxsplit/scheme_io.hpp"

namespace cxsplit {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(',', start);
    const auto item = trim(s.substr(start, end == std::string_view::npos ? s.npos : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

double to_real(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    // Accept simple fractions such as 1/6.
    const auto slash = s.find('/');
    if (slash != std::string::npos) return to_real(key, s.substr(0, slash)) / to_real(key, s.substr(slash + 1));
    throw ParseError("'" + std::string(key) + "': expected a number, got '" + s + "'", 0);
  }
  return x;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  Int x{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError("'" + std::string(key) + "': expected an integer, got '" + s + "'", 0);
  }
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ParseError("'" + std::string(key) + "': expected a boolean, got '" + s + "'", 0);
}

su2::Vec3 to_vec3(std::string_view key, std::string_view v) {
  const auto items = split_list(v);
  if (items.size() != 3) throw ParseError("'" + std::string(key) + "': expected three comma-separated reals", 0);
  return {to_real(key, items[0]), to_real(key, items[1]), to_real(key, items[2])};
}

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::su2_efficiency:
      return "su2_efficiency";
    case ExperimentKind::su2_unitarity:
      return "su2_unitarity";
    case ExperimentKind::su2_eigensweep:
      return "su2_eigensweep";
    case ExperimentKind::pde_drift:
      return "pde_drift";
    case ExperimentKind::pde_work_precision:
      return "pde_work_precision";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
  std::string key(s);
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "su2_efficiency") return ExperimentKind::su2_efficiency;
  if (key == "su2_unitarity") return ExperimentKind::su2_unitarity;
  if (key == "su2_eigensweep") return ExperimentKind::su2_eigensweep;
  if (key == "pde_drift") return ExperimentKind::pde_drift;
  if (key == "pde_work_precision" || key == "work_precision") return ExperimentKind::pde_work_precision;
  throw LookupError("unknown experiment kind '" + std::string(s) + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::su2_efficiency:
      c.schemes = {"yoshida4", "P_c_4", "SC_c_3", "SC_c_4"};
      c.t_final = 10.0;
      c.ladder_min = 4;  // h = 10/16 ... 10/16384
      c.ladder_max = 14;
      break;
    case ExperimentKind::su2_unitarity:
      c.schemes = {"SC_c_3", "SC_c_4", "P_c_4"};
      c.t_final = 1000.0;
      c.budget = 12000;  // h = 1/6 for two stages, 1/4 for three
      break;
    case ExperimentKind::su2_eigensweep:
      c.schemes = {"SC_c_3", "SC_c_4", "P_c_4"};
      break;
    case ExperimentKind::pde_drift:
      c.schemes = {"P_r_4", "P_c_4", "SC_c_3", "SC_r_3", "SC_r_4", "Xi_SC_r_4", "Xi_P_r_4"};
      c.potential = spectral::PotentialKind::quartic;
      c.N = 128;
      c.t_final = 8000.0;
      c.budget = 1572864;
      break;
    case ExperimentKind::pde_work_precision:
      c.schemes = {"strang_TV", "yoshida4", "SC_r_3", "P_r_4", "SC_r_4", "Xi_SC_r_4", "Xi_P_r_4"};
      c.potential = spectral::PotentialKind::poschl_teller;
      c.N = 512;
      c.t_final = 100.0;
      c.ladder_min = 1;  // dt = 1/2 ... 1/256
      c.ladder_max = 8;
      break;
  }
  return c;
}

void apply_setting(ExperimentConfig& c, std::string_view raw_key, std::string_view value) {
  std::string key(trim(raw_key));
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "schemes") {
    c.schemes = split_list(value);
  } else if (key == "a") {
    c.a = to_vec3(key, value);
  } else if (key == "b") {
    c.b = to_vec3(key, value);
  } else if (key == "potential") {
    try {
      c.potential = spectral::potential_kind_from_string(trim(value));
    } catch (const LookupError& e) {
      throw ParseError(e.what(), 0);
    }
    // Grid defaults follow the potential unless N is set afterwards.
    c.N = c.potential == spectral::PotentialKind::poschl_teller ? 512 : 128;
  } else if (key == "lambda_product") {
    c.lambda_product = to_real(key, value);
  } else if (key == "cutoff") {
    const auto v = trim(value);
    if (v == "off" || v == "none" || v.empty()) {
      c.cutoff.reset();
    } else {
      c.cutoff = to_real(key, v);
    }
  } else if (key == "table" || key == "potential_table") {
    c.potential_table = trim(value);
    c.potential = spectral::PotentialKind::table;
  } else if (key == "L") {
    c.L = to_real(key, value);
  } else if (key == "N") {
    c.N = to_int<std::size_t>(key, value);
  } else if (key == "mu") {
    c.mu = to_real(key, value);
  } else if (key == "role_swap") {
    c.role_swap = to_bool(key, value);
  } else if (key == "record_every") {
    c.record_every = to_int<std::size_t>(key, value);
  } else if (key == "t_final" || key == "tf") {
    c.t_final = to_real(key, value);
  } else if (key == "budget") {
    c.budget = to_int<std::uint64_t>(key, value);
  } else if (key == "steps" || key == "h" || key == "dt") {
    c.steps.clear();
    for (const auto& item : split_list(value)) c.steps.push_back(to_real(key, item));
  } else if (key == "ladder_min") {
    c.ladder_min = to_int<int>(key, value);
  } else if (key == "ladder_max") {
    c.ladder_max = to_int<int>(key, value);
  } else if (key == "hmin") {
    c.hmin = to_real(key, value);
  } else if (key == "hmax") {
    c.hmax = to_real(key, value);
  } else if (key == "hpoints") {
    c.hpoints = to_int<std::size_t>(key, value);
  } else if (key == "bisection_tol") {
    c.bisection_tol = to_real(key, value);
  } else if (key == "output" || key == "out") {
    c.output = trim(value);
  } else {
    throw ParseError("unknown config key '" + key + "'", 0);
  }
}

ConfigFile parse_config_file(std::istream& in) {
  ConfigFile file;
  std::string section;
  std::string raw;
  int line = 0;
  file[section];
  while (std::getline(in, raw)) {
    ++line;
    if (const auto pos = raw.find('#'); pos != std::string::npos) raw.resize(pos);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("unterminated section header", line);
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      std::replace(section.begin(), section.end(), '-', '_');
      file[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line);
    // Validate the key/value now so errors carry a line number.
    ExperimentConfig probe;
    try {
      apply_setting(probe, key, std::string_view(s).substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    file[section].emplace_back(key, trim(std::string_view(s).substr(eq + 1)));
  }
  return file;
}

ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  return parse_config_file(in);
}

ExperimentConfig resolve_config(ExperimentKind kind, const ConfigFile* file,
                                const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentConfig c = default_config(kind);
  if (file) {
    for (const std::string& section : {std::string(), std::string(to_string(kind))}) {
      if (auto it = file->find(section); it != file->end()) {
        for (const auto& [k, v] : it->second) apply_setting(c, k, v);
      }
    }
    if (kind == ExperimentKind::pde_work_precision) {
      if (auto it = file->find("work_precision"); it != file->end()) {
        for (const auto& [k, v] : it->second) apply_setting(c, k, v);
      }
    }
  }
  for (const auto& [k, v] : overrides) apply_setting(c, k, v);
  return c;
}

std::string canonical_string(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "kind=" << to_string(c.kind) << ";schemes=";
  for (const auto& s : c.schemes) os << s << ',';
  os << ";a=" << fmt_real(c.a[0]) << ',' << fmt_real(c.a[1]) << ',' << fmt_real(c.a[2]);
  os << ";b=" << fmt_real(c.b[0]) << ',' << fmt_real(c.b[1]) << ',' << fmt_real(c.b[2]);
  os << ";potential=" << spectral::to_string(c.potential) << ";lambda_product=" << fmt_real(c.lambda_product);
  os << ";cutoff=" << (c.cutoff ? fmt_real(*c.cutoff) : "off") << ";table=" << c.potential_table;
  os << ";L=" << fmt_real(c.L) << ";N=" << c.N << ";mu=" << fmt_real(c.mu) << ";role_swap=" << c.role_swap;
  os << ";record_every=" << c.record_every << ";t_final=" << fmt_real(c.t_final) << ";budget=" << c.budget;
  os << ";steps=";
  for (double h : c.steps) os << fmt_real(h) << ',';
  os << ";ladder=" << c.ladder_min << ".." << c.ladder_max;
  os << ";h=" << fmt_real(c.hmin) << ".." << fmt_real(c.hmax) << '/' << c.hpoints;
  os << ";bisection_tol=" << fmt_real(c.bisection_tol);
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_string(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void validate(const ExperimentConfig& c) {
  if (c.schemes.empty()) throw ValidationError("no schemes configured");
  std::vector<SplittingScheme> resolved;
  for (const auto& name : c.schemes) {
    try {
      resolved.push_back(resolve_scheme(name));
    } catch (const LookupError& e) {
      throw ValidationError(e.what());
    }
  }
  if (!(c.t_final > 0.0)) throw ValidationError("t_final must be positive");
  for (double h : c.steps) {
    if (!(h > 0.0)) throw ValidationError("step sizes must be positive");
  }
  switch (c.kind) {
    case ExperimentKind::su2_efficiency:
    case ExperimentKind::pde_work_precision:
      if (c.steps.empty() && c.ladder_max < c.ladder_min) throw ValidationError("empty step ladder");
      break;
    case ExperimentKind::su2_unitarity:
      for (const auto& s : resolved) {
        if (c.steps.empty() && c.budget < s.stages()) {
          throw ValidationError("budget too small for one step of " + s.name());
        }
      }
      break;
    case ExperimentKind::su2_eigensweep:
      if (!(c.hmin > 0.0 && c.hmax > c.hmin) || c.hpoints < 2) throw ValidationError("invalid h grid");
      break;
    case ExperimentKind::pde_drift:
      for (const auto& s : resolved) {
        if (c.budget < spectral::ffts_per_step(s, c.role_swap)) {
          throw ValidationError("budget too small for one step of " + s.name());
        }
      }
      break;
  }
}

}  // namespace cxsplit
