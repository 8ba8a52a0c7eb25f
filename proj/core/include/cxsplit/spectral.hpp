#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cxsplit/fourier.hpp"
#include "cxsplit/records.hpp"
#include "cxsplit/schemes.hpp"

namespace cxsplit::spectral {

/// Uniform periodic grid on [-L, L) with N nodes.
struct Grid {
  double L = 0.0;
  double x0 = 0.0;
  double dx = 0.0;
  std::size_t N = 0;
  std::vector<double> x;
  /// Angular wavenumbers pi*m/L in FFT order, m = 0..N/2-1, -N/2..-1.
  std::vector<double> k;
};

/// Throws ValidationError unless N is a power of two (>= 2) and L > 0.
std::shared_ptr<const Grid> make_grid(double L, std::size_t N);

struct WaveFunction {
  std::shared_ptr<const Grid> grid;
  std::vector<cplx> u;
  std::uint64_t fft_count = 0;

  /// sqrt(dx * sum |u_n|^2)
  double norm() const;
};

/// sigma * exp(-x^2/2), sigma fixed by the discrete norm.
WaveFunction initial_gaussian(std::shared_ptr<const Grid> grid);

enum class PotentialKind { quartic, poschl_teller, table };

std::string_view to_string(PotentialKind k);
PotentialKind potential_kind_from_string(std::string_view s);

struct PotentialSpec {
  PotentialKind kind = PotentialKind::quartic;
  /// lambda (lambda + 1) for Poschl-Teller.
  double lambda_product = 10.0;
  /// Node values for kind == table.
  std::vector<double> table;
  /// Upper bound on Re(exponent) in each potential factor.
  std::optional<double> cutoff;

  static PotentialSpec quartic() { return {}; }
  static PotentialSpec poschl_teller(double lambda_product = 10.0) {
    PotentialSpec p;
    p.kind = PotentialKind::poschl_teller;
    p.lambda_product = lambda_product;
    return p;
  }

  std::vector<double> sample(const Grid& g) const;
};

/// Two columns "x V(x)", one row per grid node in order; '#' comments.
/// Throws ParseError when a node does not match the grid (relative 1e-9).
PotentialSpec load_potential_table(const std::filesystem::path& path, const Grid& g);

struct EnergyValue {
  double value = 0.0;
  double imag = 0.0;  ///< diagnostic; ~0 for a Hermitian H
};

inline constexpr double kAmplitudeLimit = 1e100;

/// Split-step Fourier propagator for i u' = (T + V) u, T = -(1/2mu) d^2/dx^2.
///
/// Holds the transform plans and scratch space for one evolution at a time;
/// use one instance per thread.
class Propagator {
 public:
  Propagator(std::shared_ptr<const Grid> grid, PotentialSpec potential, double mu = 1.0);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const PotentialSpec& potential() const { return potential_; }
  std::span<const double> potential_values() const { return v_; }
  double mu() const { return mu_; }
  const FourierTransform& transform() const { return fft_; }

  /// u_n <- exp(coeff * tau * V(x_n)) u_n with tau = -i dt.
  void potential_step(WaveFunction& w, cplx coeff, double dt) const;
  /// u <- F^{-1} exp(coeff * tau * k^2/(2mu)) F u; fft_count += 2.
  void kinetic_step(WaveFunction& w, cplx coeff, double dt) const;
  /// One step of s, b_1 potential factor first. With role_swap the b_j
  /// weight the kinetic factor and the a_j the potential.
  void scheme_step(WaveFunction& w, const SplittingScheme& s, double dt, bool role_swap = false) const;

  /// Re <u, (T+V) u>_dx. Does not touch w.fft_count.
  EnergyValue energy(const WaveFunction& w) const;

  /// Factor exp(coeff * tau * V) honoring the cutoff.
  std::vector<cplx> potential_factor(cplx coeff, double dt) const;
  /// exp(coeff * tau * k^2/(2mu)) / N, ready to apply between transforms.
  std::vector<cplx> kinetic_factor(cplx coeff, double dt) const;

 private:
  std::shared_ptr<const Grid> grid_;
  PotentialSpec potential_;
  double mu_;
  std::vector<double> v_;
  std::vector<double> kin_;  // k^2/(2mu)
  FourierTransform fft_;
};

/// Throws InstabilityError if any |u_n| exceeds kAmplitudeLimit or is not finite.
void check_amplitudes(const WaveFunction& w);

struct EvolveOptions {
  /// 0 picks the smallest stride giving at most 4000 records.
  std::size_t record_every = 0;
  bool role_swap = false;
  /// Norm error above this ends the run as diverged.
  double divergence_threshold = 1e50;
};

struct EvolutionResult {
  std::vector<TimeSeriesRecord> records;  ///< includes t = 0
  bool diverged = false;
  std::optional<double> blowup_time;
  std::size_t steps_done = 0;
  std::uint64_t propagation_ffts = 0;
  std::uint64_t observable_ffts = 0;  ///< transforms spent on energy evaluation
  double initial_energy = 0.0;
  WaveFunction final_state;
};

std::size_t default_record_every(std::size_t n_steps);

/// FFTs per step of s: 2 per kinetic factor.
std::uint64_t ffts_per_step(const SplittingScheme& s, bool role_swap = false);

/// Iterates scheme_step n_steps times; instability is reported through the
/// result (diverged, blowup_time), never thrown.
EvolutionResult evolve(const WaveFunction& w0, const SplittingScheme& s, const Propagator& prop, double dt,
                       std::size_t n_steps, const EvolveOptions& opts = {});

}  // namespace cxsplit::spectral
