#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cxsplit/spectral.hpp"
#include "cxsplit/su2.hpp"

namespace cxsplit {

enum class ExperimentKind { su2_efficiency, su2_unitarity, su2_eigensweep, pde_drift, pde_work_precision };

std::string_view to_string(ExperimentKind k);
/// Accepts both "pde_drift" and "pde-drift" spellings, plus the CLI
/// subcommand name "work-precision".
ExperimentKind experiment_kind_from_string(std::string_view s);

/// Declarative description of one experiment. default_config() fills in the
/// published protocol for each kind.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::su2_efficiency;
  std::vector<std::string> schemes;

  // SU(2): H = a.sigma + b.sigma
  su2::Vec3 a{1.0, 0.0, 0.0};
  su2::Vec3 b{0.0, 1.0, 0.0};

  // PDE
  spectral::PotentialKind potential = spectral::PotentialKind::quartic;
  double lambda_product = 10.0;
  std::optional<double> cutoff;
  std::string potential_table;
  double L = 8.0;
  std::size_t N = 128;
  double mu = 1.0;
  bool role_swap = false;
  std::size_t record_every = 0;

  double t_final = 10.0;
  /// pde_drift: shared propagation FFT budget. su2_unitarity: shared budget
  /// of A-stages (Strang kernels for the gamma-form schemes).
  std::uint64_t budget = 0;

  /// Explicit step sizes. When empty, sweeps use the ladder
  /// t_final / 2^k (su2_efficiency) or 2^-k (pde_work_precision) for
  /// k in [ladder_min, ladder_max].
  std::vector<double> steps;
  int ladder_min = 0;
  int ladder_max = 0;

  // su2_eigensweep grid and bisection tolerance
  double hmin = 1.0;
  double hmax = 3.0;
  std::size_t hpoints = 201;
  double bisection_tol = 1e-9;

  std::string output;
};

ExperimentConfig default_config(ExperimentKind kind);

/// Sets one field from its textual key; throws ParseError (line 0) on an
/// unknown key or malformed value.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Sections of a config file: `[section]` headers, `key = value` lines,
/// '#' comments. Keys before any header belong to section "".
using ConfigFile = std::map<std::string, std::vector<std::pair<std::string, std::string>>>;

ConfigFile parse_config_file(std::istream& in);
ConfigFile load_config_file(const std::string& path);

/// default_config(kind), then the file's "" section, then its section for
/// this kind (either spelling), then overrides in order.
ExperimentConfig resolve_config(ExperimentKind kind, const ConfigFile* file,
                                const std::vector<std::pair<std::string, std::string>>& overrides);

/// Resolved settings in a fixed key order; input to config_hash.
std::string canonical_string(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Throws ValidationError for unresolvable schemes and impossible budgets.
void validate(const ExperimentConfig& cfg);

}  // namespace cxsplit
