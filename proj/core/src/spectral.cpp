#include "cxsplit/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "cxsplit/errors.hpp"

namespace cxsplit::spectral {

namespace {

constexpr cplx I{0.0, 1.0};

double l2_norm(const Grid& g, std::span<const cplx> u) {
  double s = 0.0;
  for (const cplx z : u) s += std::norm(z);
  return std::sqrt(g.dx * s);
}

void multiply(std::span<cplx> u, std::span<const cplx> f) {
  for (std::size_t n = 0; n < u.size(); ++n) u[n] *= f[n];
}

double max_abs2(std::span<const cplx> u) {
  double m = 0.0;
  for (const cplx z : u) {
    const double a = std::norm(z);
    if (!(a <= m)) m = a;  // propagates NaN
  }
  return m;
}

}  // namespace

std::shared_ptr<const Grid> make_grid(double L, std::size_t N) {
  if (!(L > 0.0)) throw ValidationError("make_grid: L must be positive");
  if (N < 2 || !std::has_single_bit(N)) {
    throw ValidationError("make_grid: N must be a power of two >= 2, got " + std::to_string(N));
  }
  auto g = std::make_shared<Grid>();
  g->L = L;
  g->N = N;
  g->x0 = -L;
  g->dx = 2.0 * L / static_cast<double>(N);
  g->x.resize(N);
  g->k.resize(N);
  const auto half = static_cast<long>(N / 2);
  for (std::size_t n = 0; n < N; ++n) {
    g->x[n] = g->x0 + static_cast<double>(n) * g->dx;
    const long m = static_cast<long>(n) < half ? static_cast<long>(n) : static_cast<long>(n) - static_cast<long>(N);
    g->k[n] = std::numbers::pi * static_cast<double>(m) / L;
  }
  return g;
}

double WaveFunction::norm() const { return l2_norm(*grid, u); }

WaveFunction initial_gaussian(std::shared_ptr<const Grid> grid) {
  WaveFunction w;
  w.grid = std::move(grid);
  w.u.resize(w.grid->N);
  for (std::size_t n = 0; n < w.grid->N; ++n) {
    const double x = w.grid->x[n];
    w.u[n] = std::exp(-0.5 * x * x);
  }
  const double scale = 1.0 / w.norm();
  for (auto& z : w.u) z *= scale;
  return w;
}

// ---------------------------------------------------------------------------

std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::quartic:
      return "quartic";
    case PotentialKind::poschl_teller:
      return "poschl_teller";
    case PotentialKind::table:
      return "table";
  }
  return "table";
}

PotentialKind potential_kind_from_string(std::string_view s) {
  if (s == "quartic") return PotentialKind::quartic;
  if (s == "poschl_teller") return PotentialKind::poschl_teller;
  if (s == "table") return PotentialKind::table;
  throw LookupError("unknown potential '" + std::string(s) + "' (expected quartic, poschl_teller or table)");
}

std::vector<double> PotentialSpec::sample(const Grid& g) const {
  std::vector<double> v(g.N);
  switch (kind) {
    case PotentialKind::quartic:
      for (std::size_t n = 0; n < g.N; ++n) {
        const double x2 = g.x[n] * g.x[n];
        v[n] = -0.5 * x2 + x2 * x2 / 20.0;
      }
      break;
    case PotentialKind::poschl_teller:
      for (std::size_t n = 0; n < g.N; ++n) {
        const double sech = 1.0 / std::cosh(g.x[n]);
        v[n] = -0.5 * lambda_product * sech * sech;
      }
      break;
    case PotentialKind::table:
      if (table.size() != g.N) {
        throw ValidationError("potential table has " + std::to_string(table.size()) + " values for " +
                              std::to_string(g.N) + " grid nodes");
      }
      v = table;
      break;
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError("potential is not finite on the grid");
  }
  return v;
}

PotentialSpec load_potential_table(const std::filesystem::path& path, const Grid& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open potential table '" + path.string() + "'");
  PotentialSpec p;
  p.kind = PotentialKind::table;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto pos = raw.find('#'); pos != std::string::npos) raw.resize(pos);
    std::istringstream ls(raw);
    double x = 0.0;
    double v = 0.0;
    if (!(ls >> x)) continue;
    if (!(ls >> v)) throw ParseError("expected 'x V(x)'", line);
    const std::size_t n = p.table.size();
    if (n >= g.N) throw ParseError("more rows than grid nodes", line);
    if (std::abs(x - g.x[n]) > 1e-9 * std::max(1.0, g.L)) {
      throw ParseError("node x = " + std::to_string(x) + " does not match grid node " + std::to_string(g.x[n]),
                       line);
    }
    if (!std::isfinite(v)) throw ParseError("non-finite potential value", line);
    p.table.push_back(v);
  }
  if (p.table.size() != g.N) {
    throw ParseError("table has " + std::to_string(p.table.size()) + " rows, grid has " + std::to_string(g.N),
                     line);
  }
  return p;
}

// ---------------------------------------------------------------------------

Propagator::Propagator(std::shared_ptr<const Grid> grid, PotentialSpec potential, double mu)
    : grid_(std::move(grid)), potential_(std::move(potential)), mu_(mu), fft_(grid_->N) {
  if (!(mu_ > 0.0)) throw ValidationError("Propagator: mu must be positive");
  v_ = potential_.sample(*grid_);
  kin_.resize(grid_->N);
  for (std::size_t n = 0; n < grid_->N; ++n) kin_[n] = grid_->k[n] * grid_->k[n] / (2.0 * mu_);
}

std::vector<cplx> Propagator::potential_factor(cplx coeff, double dt) const {
  const cplx tau = -I * dt;
  std::vector<cplx> f(v_.size());
  for (std::size_t n = 0; n < v_.size(); ++n) {
    cplx e = coeff * tau * v_[n];
    if (potential_.cutoff && e.real() > *potential_.cutoff) e.real(*potential_.cutoff);
    f[n] = std::exp(e);
  }
  return f;
}

std::vector<cplx> Propagator::kinetic_factor(cplx coeff, double dt) const {
  const cplx tau = -I * dt;
  const double inv_n = 1.0 / static_cast<double>(grid_->N);
  std::vector<cplx> f(kin_.size());
  for (std::size_t n = 0; n < kin_.size(); ++n) f[n] = std::exp(coeff * tau * kin_[n]) * inv_n;
  return f;
}

void check_amplitudes(const WaveFunction& w) {
  const double m = max_abs2(w.u);
  if (!(m <= kAmplitudeLimit * kAmplitudeLimit)) {
    throw InstabilityError("wave function amplitude exceeded 1e100");
  }
}

void Propagator::potential_step(WaveFunction& w, cplx coeff, double dt) const {
  multiply(w.u, potential_factor(coeff, dt));
  check_amplitudes(w);
}

void Propagator::kinetic_step(WaveFunction& w, cplx coeff, double dt) const {
  const auto f = kinetic_factor(coeff, dt);
  fft_.forward(w.u);
  multiply(w.u, f);
  fft_.backward(w.u);
  w.fft_count += 2;
  check_amplitudes(w);
}

void Propagator::scheme_step(WaveFunction& w, const SplittingScheme& s, double dt, bool role_swap) const {
  const auto a = s.a();
  const auto b = s.b();
  if (!(dt > 0.0)) throw ValidationError("scheme_step: dt must be positive");
  if (!role_swap) {
    potential_step(w, b[0], dt);
    for (std::size_t j = 0; j < a.size(); ++j) {
      kinetic_step(w, a[j], dt);
      potential_step(w, b[j + 1], dt);
    }
  } else {
    kinetic_step(w, b[0], dt);
    for (std::size_t j = 0; j < a.size(); ++j) {
      potential_step(w, a[j], dt);
      kinetic_step(w, b[j + 1], dt);
    }
  }
}

EnergyValue Propagator::energy(const WaveFunction& w) const {
  std::vector<cplx> tu(w.u.begin(), w.u.end());
  fft_.forward(tu);
  const double inv_n = 1.0 / static_cast<double>(grid_->N);
  for (std::size_t n = 0; n < tu.size(); ++n) tu[n] *= kin_[n] * inv_n;
  fft_.backward(tu);
  cplx e{};
  for (std::size_t n = 0; n < tu.size(); ++n) e += std::conj(w.u[n]) * (tu[n] + v_[n] * w.u[n]);
  e *= grid_->dx;
  return {e.real(), e.imag()};
}

// ---------------------------------------------------------------------------

std::size_t default_record_every(std::size_t n_steps) { return std::max<std::size_t>(1, (n_steps + 3999) / 4000); }

std::uint64_t ffts_per_step(const SplittingScheme& s, bool role_swap) {
  return 2 * static_cast<std::uint64_t>(role_swap ? s.b().size() : s.a().size());
}

EvolutionResult evolve(const WaveFunction& w0, const SplittingScheme& s, const Propagator& prop, double dt,
                       std::size_t n_steps, const EvolveOptions& opts) {
  if (n_steps < 1) throw ValidationError("evolve: n_steps must be >= 1");
  if (!(dt > 0.0)) throw ValidationError("evolve: dt must be positive");

  struct Stage {
    bool kinetic;
    std::vector<cplx> factor;
  };
  std::vector<Stage> stages;
  const auto a = s.a();
  const auto b = s.b();
  const bool swap = opts.role_swap;
  auto add_b = [&](cplx c) {
    stages.push_back({swap, swap ? prop.kinetic_factor(c, dt) : prop.potential_factor(c, dt)});
  };
  auto add_a = [&](cplx c) {
    stages.push_back({!swap, swap ? prop.potential_factor(c, dt) : prop.kinetic_factor(c, dt)});
  };
  add_b(b[0]);
  for (std::size_t j = 0; j < a.size(); ++j) {
    add_a(a[j]);
    add_b(b[j + 1]);
  }

  const std::size_t every = opts.record_every ? opts.record_every : default_record_every(n_steps);
  const std::uint64_t per_step = ffts_per_step(s, swap);
  const auto& fft = prop.transform();

  EvolutionResult res;
  WaveFunction w = w0;
  const double e0 = prop.energy(w).value;
  res.initial_energy = e0;
  res.observable_ffts += 2;
  res.records.push_back({0.0, std::abs(w.norm() - 1.0), 0.0, 0.0, 0});
  res.records.reserve(n_steps / every + 2);

  std::uint64_t start_ffts = w.fft_count;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    for (const auto& st : stages) {
      if (st.kinetic) {
        fft.forward(w.u);
        multiply(w.u, st.factor);
        fft.backward(w.u);
      } else {
        multiply(w.u, st.factor);
      }
    }
    w.fft_count += per_step;
    const double t = static_cast<double>(n) * dt;
    if (!(max_abs2(w.u) <= kAmplitudeLimit * kAmplitudeLimit)) {
      res.diverged = true;
      res.blowup_time = t;
      res.steps_done = n;
      break;
    }
    res.steps_done = n;
    if (n % every == 0 || n == n_steps) {
      const double norm_err = std::abs(w.norm() - 1.0);
      const double energy_err = std::abs(prop.energy(w).value - e0);
      res.observable_ffts += 2;
      res.records.push_back({t, norm_err, energy_err, 0.0, w.fft_count - start_ffts});
      if (!(norm_err <= opts.divergence_threshold)) {
        res.diverged = true;
        res.blowup_time = t;
        break;
      }
    }
  }
  res.propagation_ffts = w.fft_count - start_ffts;
  res.final_state = std::move(w);
  return res;
}

}  // namespace cxsplit::spectral
