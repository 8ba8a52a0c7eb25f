#include "cxsplit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "cxsplit/errors.hpp"
#include "cxsplit/scheme_io.hpp"

namespace cxsplit::harness {

namespace {

std::vector<SplittingScheme> resolve_all(const ExperimentConfig& cfg) {
  std::vector<SplittingScheme> out;
  out.reserve(cfg.schemes.size());
  for (const auto& name : cfg.schemes) out.push_back(resolve_scheme(name));
  return out;
}

/// Explicit steps if given, otherwise base / 2^k over the ladder.
std::vector<double> step_ladder(const ExperimentConfig& cfg, double base) {
  if (!cfg.steps.empty()) return cfg.steps;
  std::vector<double> hs;
  for (int k = cfg.ladder_min; k <= cfg.ladder_max; ++k) hs.push_back(std::ldexp(base, -k));
  return hs;
}

std::size_t steps_for(double t_final, double h) {
  const double n = std::round(t_final / h);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class Reporter {
 public:
  explicit Reporter(const ProgressFn& fn) : fn_(fn) {}
  void operator()(const std::string& line) {
    if (!fn_) return;
    std::lock_guard lock(mu_);
    fn_(line);
  }

 private:
  const ProgressFn& fn_;
  std::mutex mu_;
};

}  // namespace

std::uint64_t exponentials_per_step(const SplittingScheme& s) { return s.a().size() + s.b().size(); }

BudgetSplit split_budget(std::uint64_t budget, std::uint64_t cost_per_step, double t_final) {
  if (cost_per_step == 0) throw ValidationError("split_budget: zero cost per step");
  const std::uint64_t steps = budget / cost_per_step;
  if (steps == 0) throw ValidationError("split_budget: budget smaller than one step");
  return {static_cast<std::size_t>(steps), t_final / static_cast<double>(steps)};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

spectral::PotentialSpec make_potential(const ExperimentConfig& cfg, const spectral::Grid& grid) {
  spectral::PotentialSpec p;
  switch (cfg.potential) {
    case spectral::PotentialKind::quartic:
      p = spectral::PotentialSpec::quartic();
      break;
    case spectral::PotentialKind::poschl_teller:
      p = spectral::PotentialSpec::poschl_teller(cfg.lambda_product);
      break;
    case spectral::PotentialKind::table:
      if (cfg.potential_table.empty()) throw ValidationError("potential = table needs a table path");
      p = spectral::load_potential_table(cfg.potential_table, grid);
      break;
  }
  p.cutoff = cfg.cutoff;
  return p;
}

// ---------------------------------------------------------------------------
// SU(2)

std::vector<EfficiencyRow> run_su2_efficiency(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const auto schemes = resolve_all(cfg);
  const auto hs = step_ladder(cfg, cfg.t_final);
  std::vector<EfficiencyRow> rows(schemes.size() * hs.size());
  Reporter report(progress);
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto& s = schemes[i / hs.size()];
    const std::size_t n = steps_for(cfg.t_final, hs[i % hs.size()]);
    EfficiencyRow& r = rows[i];
    r.scheme = s.name();
    r.steps = n;
    r.h = cfg.t_final / static_cast<double>(n);
    r.cost = exponentials_per_step(s) * n;
    try {
      r.err2norm = su2::final_error_su2(s, cfg.a, cfg.b, cfg.t_final, n);
      r.diverged = !std::isfinite(r.err2norm);
    } catch (const InstabilityError&) {
      r.err2norm = std::numeric_limits<double>::infinity();
      r.diverged = true;
    }
    report(fmt("%s h=%.6g cost=%llu err=%.3e", r.scheme.c_str(), r.h, static_cast<unsigned long long>(r.cost),
               r.err2norm));
  });
  return rows;
}

std::vector<UnitarityTrace> run_su2_unitarity(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const auto schemes = resolve_all(cfg);
  std::vector<UnitarityTrace> traces(schemes.size());
  Reporter report(progress);
  parallel_for(schemes.size(), [&](std::size_t i) {
    const auto& s = schemes[i];
    std::size_t n = 0;
    if (!cfg.steps.empty()) {
      n = steps_for(cfg.t_final, cfg.steps[std::min(i, cfg.steps.size() - 1)]);
    } else {
      // Equal cost: the budget counts A-stages (12000 gives N = 6000 for two stages, 4000 for three).
      n = split_budget(cfg.budget, s.a().size(), cfg.t_final).steps;
    }
    UnitarityTrace& tr = traces[i];
    tr.scheme = s.name();
    tr.h = cfg.t_final / static_cast<double>(n);
    const std::uint64_t per_step = exponentials_per_step(s);
    try {
      const auto samples = su2::evolve_su2(s, cfg.a, cfg.b, tr.h, n);
      tr.records.reserve(samples.size());
      std::uint64_t k = 0;
      for (const auto& smp : samples) {
        tr.records.push_back({smp.t, smp.unitarity_error, 0.0, smp.two_norm_error, per_step * k++});
      }
    } catch (const InstabilityError&) {
      tr.diverged = true;
    }
    double worst = 0.0;
    for (const auto& r : tr.records) worst = std::max(worst, r.norm_error);
    report(fmt("%s h=%.6g steps=%zu max_unit_err=%.3e%s", tr.scheme.c_str(), tr.h, n, worst,
               tr.diverged ? " diverged" : ""));
  });
  return traces;
}

EigensweepResult run_su2_eigensweep(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const auto schemes = resolve_all(cfg);
  const std::size_t np = cfg.hpoints;
  EigensweepResult out;
  out.rows.resize(schemes.size() * np);
  out.critical.resize(schemes.size());
  Reporter report(progress);
  parallel_for(schemes.size(), [&](std::size_t i) {
    const auto& s = schemes[i];
    for (std::size_t p = 0; p < np; ++p) {
      const double h = cfg.hmin + (cfg.hmax - cfg.hmin) * static_cast<double>(p) / static_cast<double>(np - 1);
      const auto [m1, m2] = su2::eigenvalue_moduli(su2::apply_scheme_su2(s, cfg.a, cfg.b, h));
      out.rows[i * np + p] = {s.name(), h, m1, m2};
    }
    CriticalStep& c = out.critical[i];
    c.scheme = s.name();
    if (s.structure() == Structure::symmetric_conjugate) {
      try {
        c.h_star = su2::critical_step(s, cfg.a, cfg.b, cfg.hmin, cfg.hmax, cfg.bisection_tol);
      } catch (const BracketError&) {
        c.h_star.reset();
      }
    }
    report(c.h_star ? fmt("%s h*=%.12f", c.scheme.c_str(), *c.h_star) : fmt("%s swept", c.scheme.c_str()));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Schrodinger

std::vector<DriftTrace> run_pde_drift(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const auto schemes = resolve_all(cfg);
  const auto grid = spectral::make_grid(cfg.L, cfg.N);
  const auto potential = make_potential(cfg, *grid);
  std::vector<DriftTrace> traces(schemes.size());
  Reporter report(progress);
  parallel_for(schemes.size(), [&](std::size_t i) {
    const auto& s = schemes[i];
    const spectral::Propagator prop(grid, potential, cfg.mu);
    DriftTrace& tr = traces[i];
    tr.scheme = s.name();
    tr.ffts_per_step = spectral::ffts_per_step(s, cfg.role_swap);
    const auto split = split_budget(cfg.budget, tr.ffts_per_step, cfg.t_final);
    tr.steps = split.steps;
    tr.dt = split.dt;
    spectral::EvolveOptions opts;
    opts.record_every = cfg.record_every;
    opts.role_swap = cfg.role_swap;
    auto res = spectral::evolve(spectral::initial_gaussian(grid), s, prop, tr.dt, tr.steps, opts);
    tr.records = std::move(res.records);
    tr.diverged = res.diverged;
    tr.blowup_time = res.blowup_time;
    tr.propagation_ffts = res.propagation_ffts;
    tr.observable_ffts = res.observable_ffts;
    report(tr.diverged ? fmt("%s dt=%.6g diverged at t=%.6g", tr.scheme.c_str(), tr.dt, *tr.blowup_time)
                       : fmt("%s dt=%.6g norm_err=%.3e energy_err=%.3e", tr.scheme.c_str(), tr.dt,
                             tr.records.back().norm_error, tr.records.back().energy_error));
  });
  return traces;
}

std::vector<WorkPrecisionRow> run_pde_work_precision(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const auto schemes = resolve_all(cfg);
  const auto grid = spectral::make_grid(cfg.L, cfg.N);
  const auto potential = make_potential(cfg, *grid);
  const auto dts = step_ladder(cfg, 1.0);
  std::vector<WorkPrecisionRow> rows(schemes.size() * dts.size());
  Reporter report(progress);
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto& s = schemes[i / dts.size()];
    const spectral::Propagator prop(grid, potential, cfg.mu);
    WorkPrecisionRow& r = rows[i];
    r.scheme = s.name();
    r.steps = steps_for(cfg.t_final, dts[i % dts.size()]);
    r.dt = cfg.t_final / static_cast<double>(r.steps);
    spectral::EvolveOptions opts;
    opts.record_every = cfg.record_every ? cfg.record_every : 1;
    opts.role_swap = cfg.role_swap;
    const auto res = spectral::evolve(spectral::initial_gaussian(grid), s, prop, r.dt, r.steps, opts);
    r.ffts = spectral::ffts_per_step(s, cfg.role_swap) * r.steps;
    r.diverged = res.diverged;
    for (const auto& rec : res.records) {
      r.max_energy_err = std::max(r.max_energy_err, rec.energy_error);
      r.max_norm_err = std::max(r.max_norm_err, rec.norm_error);
    }
    if (r.diverged || !std::isfinite(r.max_energy_err)) {
      r.diverged = true;
      r.max_energy_err = std::numeric_limits<double>::infinity();
    }
    report(fmt("%s dt=%.6g ffts=%llu max_energy_err=%.3e%s", r.scheme.c_str(), r.dt,
               static_cast<unsigned long long>(r.ffts), r.max_energy_err, r.diverged ? " diverged" : ""));
  });
  return rows;
}

}  // namespace cxsplit::harness
