#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cxsplit/config.hpp"
#include "cxsplit/records.hpp"
#include "cxsplit/spectral.hpp"
#include "cxsplit/su2.hpp"

namespace cxsplit::harness {

struct EfficiencyRow {
  std::string scheme;
  double h = 0.0;
  std::size_t steps = 0;
  std::uint64_t cost = 0;  ///< exponential factors applied
  double err2norm = 0.0;
  bool diverged = false;
};

struct UnitarityTrace {
  std::string scheme;
  double h = 0.0;
  std::vector<TimeSeriesRecord> records;
  bool diverged = false;
};

struct EigenRow {
  std::string scheme;
  double h = 0.0;
  double mod1 = 0.0;
  double mod2 = 0.0;
};

struct CriticalStep {
  std::string scheme;
  std::optional<double> h_star;  ///< empty when the bracket has no crossing
};

struct EigensweepResult {
  std::vector<EigenRow> rows;
  std::vector<CriticalStep> critical;
};

struct DriftTrace {
  std::string scheme;
  double dt = 0.0;
  std::size_t steps = 0;
  std::uint64_t ffts_per_step = 0;
  std::vector<TimeSeriesRecord> records;
  bool diverged = false;
  std::optional<double> blowup_time;
  std::uint64_t propagation_ffts = 0;
  std::uint64_t observable_ffts = 0;
};

struct WorkPrecisionRow {
  std::string scheme;
  double dt = 0.0;
  std::size_t steps = 0;
  std::uint64_t ffts = 0;
  double max_energy_err = 0.0;
  double max_norm_err = 0.0;
  bool diverged = false;
};

/// Exponential factors per step (one per pauli_exp call).
std::uint64_t exponentials_per_step(const SplittingScheme& s);

/// Steps and step size for a shared FFT budget: steps = floor(budget /
/// ffts_per_step), dt = t_final / steps, so steps * dt = t_final.
struct BudgetSplit {
  std::size_t steps = 0;
  double dt = 0.0;
};
BudgetSplit split_budget(std::uint64_t budget, std::uint64_t cost_per_step, double t_final);

/// Progress hook: called once per finished run with a one-line summary.
using ProgressFn = std::function<void(const std::string&)>;

std::vector<EfficiencyRow> run_su2_efficiency(const ExperimentConfig& cfg, const ProgressFn& progress = {});
std::vector<UnitarityTrace> run_su2_unitarity(const ExperimentConfig& cfg, const ProgressFn& progress = {});
EigensweepResult run_su2_eigensweep(const ExperimentConfig& cfg, const ProgressFn& progress = {});
std::vector<DriftTrace> run_pde_drift(const ExperimentConfig& cfg, const ProgressFn& progress = {});
std::vector<WorkPrecisionRow> run_pde_work_precision(const ExperimentConfig& cfg,
                                                     const ProgressFn& progress = {});

/// Potential described by the config's PDE fields.
spectral::PotentialSpec make_potential(const ExperimentConfig& cfg, const spectral::Grid& grid);

/// Runs tasks 0..n-1 on up to hardware_concurrency workers; results are
/// stored by index so the output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace cxsplit::harness
