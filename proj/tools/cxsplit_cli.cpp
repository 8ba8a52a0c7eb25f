// cxsplit: command-line front end for the splitting-method experiments.
//
// Exit codes: 0 success, 2 usage/config/lookup error, 3 a run diverged
// (its data is still written), 4 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cxsplit/config.hpp"
#include "cxsplit/csv.hpp"
#include "cxsplit/errors.hpp"
#include "cxsplit/harness.hpp"
#include "cxsplit/scheme_io.hpp"
#include "cxsplit/schemes.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitIo = 4;

namespace fs = std::filesystem;
using cxsplit::ExperimentKind;

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string cplx17(cxsplit::cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%+.16e %+.16ei", z.real(), z.imag());
  return buf;
}

void print_scheme(const cxsplit::SplittingScheme& s) {
  std::cout << s.name() << "  order " << s.declared_order() << "  structure " << cxsplit::to_string(s.structure())
            << "  stages " << s.stages() << '\n';
  for (std::size_t j = 0; j < s.b().size(); ++j) {
    std::cout << "  b" << j + 1 << " = " << cplx17(s.b()[j]) << '\n';
    if (j < s.a().size()) std::cout << "  a" << j + 1 << " = " << cplx17(s.a()[j]) << '\n';
  }
}

int cmd_schemes(const std::optional<std::string>& name) {
  if (name) {
    print_scheme(cxsplit::registry_get(*name));
    return kExitOk;
  }
  for (const auto n : cxsplit::registry_names()) {
    print_scheme(cxsplit::registry_get(n));
    std::cout << '\n';
  }
  return kExitOk;
}

int cmd_order_check(const std::string& target) {
  const auto s = cxsplit::resolve_scheme(target);
  const auto rep = cxsplit::check_order_conditions(s);
  std::cout << s.name() << " (declared order " << s.declared_order() << ")\n";
  for (const auto& [label, r] : rep.residuals) {
    std::printf("  %-12s |r| = %.3e   r = %s\n", label.c_str(), std::abs(r), cplx17(r).c_str());
  }
  std::cout << "satisfied order: " << rep.satisfied_order << '\n';
  if (rep.error_measure) std::cout << "E = |omega_5,1| = " << real17(*rep.error_measure) << '\n';
  return kExitOk;
}

/// Flags shared by the experiment subcommands. Each set flag becomes a
/// config override applied after the config file.
struct RunFlags {
  std::string config_path;
  std::string out_dir = "results";
  std::vector<std::string> sets;
  std::optional<std::string> schemes, potential, steps;
  std::optional<double> hmin, hmax, tf, L;
  std::optional<std::uint64_t> budget;
  std::optional<std::size_t> n_grid, hpoints, record_every;
  bool role_swap = false;
  bool quiet = false;
};

void add_run_flags(CLI::App* sub, RunFlags& f, ExperimentKind kind) {
  sub->add_option("-c,--config", f.config_path, "Config file ([section] per experiment, key = value)")
      ->check(CLI::ExistingFile);
  sub->add_option("-o,--out", f.out_dir, "Output directory for CSV files")->capture_default_str();
  sub->add_option("--schemes", f.schemes, "Comma-separated registry names or scheme file paths");
  sub->add_option("--tf", f.tf, "Final time");
  sub->add_option("--set", f.sets, "Extra config override key=value (repeatable)");
  sub->add_flag("-q,--quiet", f.quiet, "No per-run progress lines on stderr");
  switch (kind) {
    case ExperimentKind::su2_eigensweep:
      sub->add_option("--hmin", f.hmin, "Lower end of the h grid");
      sub->add_option("--hmax", f.hmax, "Upper end of the h grid");
      sub->add_option("--hpoints", f.hpoints, "Number of grid points");
      break;
    case ExperimentKind::su2_efficiency:
      sub->add_option("--steps", f.steps, "Comma-separated step sizes (replaces the ladder)");
      break;
    case ExperimentKind::su2_unitarity:
      sub->add_option("--budget", f.budget, "Shared budget of A-stages");
      sub->add_option("--steps", f.steps, "Comma-separated step sizes, one per scheme");
      break;
    case ExperimentKind::pde_drift:
    case ExperimentKind::pde_work_precision:
      sub->add_option("--potential", f.potential, "quartic, poschl_teller or table");
      sub->add_option("--N", f.n_grid, "Grid size (power of two)");
      sub->add_option("--L", f.L, "Half-width of the periodic box");
      sub->add_option("--record-every", f.record_every, "Record stride in steps");
      sub->add_flag("--role-swap", f.role_swap, "Complex coefficients on the kinetic factor");
      if (kind == ExperimentKind::pde_drift) {
        sub->add_option("--budget", f.budget, "Shared propagation FFT budget");
      } else {
        sub->add_option("--steps", f.steps, "Comma-separated dt values (replaces the ladder)");
      }
      break;
  }
}

cxsplit::ExperimentConfig build_config(ExperimentKind kind, const RunFlags& f) {
  std::vector<std::pair<std::string, std::string>> ov;
  // potential first: it resets N to the potential's default grid.
  if (f.potential) ov.emplace_back("potential", *f.potential);
  if (f.schemes) ov.emplace_back("schemes", *f.schemes);
  if (f.steps) ov.emplace_back("steps", *f.steps);
  if (f.hmin) ov.emplace_back("hmin", real17(*f.hmin));
  if (f.hmax) ov.emplace_back("hmax", real17(*f.hmax));
  if (f.tf) ov.emplace_back("t_final", real17(*f.tf));
  if (f.L) ov.emplace_back("L", real17(*f.L));
  if (f.budget) ov.emplace_back("budget", std::to_string(*f.budget));
  if (f.n_grid) ov.emplace_back("N", std::to_string(*f.n_grid));
  if (f.hpoints) ov.emplace_back("hpoints", std::to_string(*f.hpoints));
  if (f.record_every) ov.emplace_back("record_every", std::to_string(*f.record_every));
  if (f.role_swap) ov.emplace_back("role_swap", "true");
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw cxsplit::ParseError("--set expects key=value, got '" + kv + "'", 0);
    ov.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  std::optional<cxsplit::ConfigFile> file;
  if (!f.config_path.empty()) file = cxsplit::load_config_file(f.config_path);
  auto cfg = cxsplit::resolve_config(kind, file ? &*file : nullptr, ov);
  cxsplit::validate(cfg);
  return cfg;
}

fs::path output_dir(const cxsplit::ExperimentConfig& cfg, const RunFlags& f) {
  return cfg.output.empty() ? fs::path(f.out_dir) : fs::path(cfg.output);
}

int cmd_run(ExperimentKind kind, const RunFlags& f) {
  const auto cfg = build_config(kind, f);
  const auto hash = cxsplit::config_hash(cfg);
  const fs::path dir = output_dir(cfg, f);
  cxsplit::harness::ProgressFn progress;
  if (!f.quiet) progress = [](const std::string& line) { std::cerr << "[run] " << line << '\n'; };

  bool diverged = false;
  switch (kind) {
    case ExperimentKind::su2_efficiency: {
      const auto rows = cxsplit::harness::run_su2_efficiency(cfg, progress);
      const auto path = dir / "su2_efficiency.csv";
      cxsplit::csv::write_efficiency(path, rows, hash);
      std::cout << "wrote " << path.string() << '\n';
      for (const auto& name : cfg.schemes) {
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
          if (it->scheme != cxsplit::resolve_scheme(name).name()) continue;
          std::printf("%-12s finest h=%.4e cost=%llu err2norm=%.3e\n", it->scheme.c_str(), it->h,
                      static_cast<unsigned long long>(it->cost), it->err2norm);
          break;
        }
      }
      for (const auto& r : rows) diverged = diverged || r.diverged;
      break;
    }
    case ExperimentKind::su2_unitarity: {
      const auto traces = cxsplit::harness::run_su2_unitarity(cfg, progress);
      const auto path = dir / "su2_unitarity.csv";
      cxsplit::csv::write_unitarity(path, traces, hash);
      std::cout << "wrote " << path.string() << '\n';
      for (const auto& tr : traces) {
        double worst = 0.0;
        for (const auto& r : tr.records) worst = std::max(worst, r.norm_error);
        const double last = tr.records.empty() ? 0.0 : tr.records.back().norm_error;
        std::printf("%-12s h=%.6g max unit_err=%.3e final unit_err=%.3e%s\n", tr.scheme.c_str(), tr.h, worst,
                    last, tr.diverged ? " DIVERGED" : "");
        diverged = diverged || tr.diverged;
      }
      break;
    }
    case ExperimentKind::su2_eigensweep: {
      const auto res = cxsplit::harness::run_su2_eigensweep(cfg, progress);
      const auto path = dir / "su2_eigensweep.csv";
      cxsplit::csv::write_eigensweep(path, res, hash);
      std::cout << "wrote " << path.string() << '\n';
      for (const auto& c : res.critical) {
        if (c.h_star) {
          std::printf("%-12s h* = %.12f\n", c.scheme.c_str(), *c.h_star);
        } else {
          double lo = 1e300;
          for (const auto& r : res.rows) {
            if (r.scheme == c.scheme) lo = std::min(lo, r.mod1);
          }
          std::printf("%-12s no crossing in [%g, %g]; min |lambda_1| on grid = %.15f\n", c.scheme.c_str(), cfg.hmin,
                      cfg.hmax, lo);
        }
      }
      break;
    }
    case ExperimentKind::pde_drift: {
      const auto traces = cxsplit::harness::run_pde_drift(cfg, progress);
      const std::string tag(cxsplit::spectral::to_string(cfg.potential));
      for (const auto& tr : traces) {
        const auto path = dir / ("drift_" + tag + "_" + tr.scheme + ".csv");
        cxsplit::csv::write_drift(path, tr, hash);
        std::cout << "wrote " << path.string() << '\n';
      }
      for (const auto& tr : traces) {
        double norm_max = 0.0;
        double energy_max = 0.0;
        for (const auto& r : tr.records) {
          norm_max = std::max(norm_max, r.norm_error);
          energy_max = std::max(energy_max, r.energy_error);
        }
        std::printf("%-12s dt=%.6e steps=%zu ffts=%llu max norm_err=%.3e max energy_err=%.3e", tr.scheme.c_str(),
                    tr.dt, tr.steps, static_cast<unsigned long long>(tr.propagation_ffts), norm_max, energy_max);
        if (tr.blowup_time) std::printf("  blow-up at t=%.6g", *tr.blowup_time);
        std::printf("\n");
        diverged = diverged || tr.diverged;
      }
      break;
    }
    case ExperimentKind::pde_work_precision: {
      const auto rows = cxsplit::harness::run_pde_work_precision(cfg, progress);
      const auto path = dir / "work_precision.csv";
      cxsplit::csv::write_work_precision(path, rows, hash);
      std::cout << "wrote " << path.string() << '\n';
      for (const auto& r : rows) {
        std::printf("%-12s dt=%.6e ffts=%-9llu max energy_err=%.3e%s\n", r.scheme.c_str(), r.dt,
                    static_cast<unsigned long long>(r.ffts), r.max_energy_err, r.diverged ? " DIVERGED" : "");
        diverged = diverged || r.diverged;
      }
      break;
    }
  }
  return diverged ? kExitDiverged : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cxsplit: splitting methods with complex coefficients"};
  app.set_version_flag("--version", std::string("cxsplit ") + CXSPLIT_VERSION);
  app.require_subcommand(1);

  std::optional<std::string> scheme_name;
  auto* schemes = app.add_subcommand("schemes", "List registry schemes with their coefficients");
  schemes->add_option("--name", scheme_name, "Show a single scheme");

  std::string order_target;
  auto* order = app.add_subcommand("order-check", "Order-condition residuals of a scheme");
  order->add_option("scheme", order_target, "Registry name or scheme file")->required();

  struct Experiment {
    const char* name;
    const char* help;
    ExperimentKind kind;
  };
  const Experiment experiments[] = {
      {"su2-efficiency", "2-norm error vs exponential count on SU(2)", ExperimentKind::su2_efficiency},
      {"su2-unitarity", "Long-run unitarity error on SU(2)", ExperimentKind::su2_unitarity},
      {"su2-eigensweep", "Eigenvalue moduli vs h and critical steps", ExperimentKind::su2_eigensweep},
      {"pde-drift", "Norm and energy drift at equal FFT budget", ExperimentKind::pde_drift},
      {"work-precision", "Max energy error vs FFT count", ExperimentKind::pde_work_precision},
  };
  std::vector<RunFlags> flags(std::size(experiments));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(experiments); ++i) {
    subs.push_back(app.add_subcommand(experiments[i].name, experiments[i].help));
    add_run_flags(subs.back(), flags[i], experiments[i].kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (schemes->parsed()) return cmd_schemes(scheme_name);
    if (order->parsed()) return cmd_order_check(order_target);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return cmd_run(experiments[i].kind, flags[i]);
    }
  } catch (const cxsplit::ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << '\n';
    return kExitUsage;
  } catch (const cxsplit::LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cxsplit::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cxsplit::InstabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const cxsplit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
