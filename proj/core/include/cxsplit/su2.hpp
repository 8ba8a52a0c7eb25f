#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cxsplit/schemes.hpp"

namespace cxsplit::su2 {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& x, const Vec3& y);
Vec3 cross(const Vec3& x, const Vec3& y);
double norm(const Vec3& x);

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
  std::array<cplx, 4> m{};

  static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }

  cplx& operator()(int i, int j) { return m[2 * i + j]; }
  const cplx& operator()(int i, int j) const { return m[2 * i + j]; }

  cplx trace() const { return m[0] + m[3]; }
  cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
  Mat2 adjoint() const { return Mat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}}; }
  double frobenius() const;
  double max_abs() const;

  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend Mat2 operator+(const Mat2& x, const Mat2& y);
  friend Mat2 operator-(const Mat2& x, const Mat2& y);
  friend Mat2 operator*(cplx z, const Mat2& x);
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Largest singular value.
double spectral_norm(const Mat2& x);

/// ||U^dagger U - I||_F
double unitarity_defect(const Mat2& u);

/// v . sigma with complex components along sigma_1, sigma_2, sigma_3.
struct PauliVector {
  std::array<cplx, 3> v{};

  static PauliVector from_real(const Vec3& r) { return PauliVector{{r[0], r[1], r[2]}}; }

  Mat2 to_matrix() const;
  /// Non-conjugating bilinear product v . v.
  cplx self_dot() const { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }
};

/// x = scalar I + vector . sigma, with scalar = tr(x)/2, vector_k = tr(x sigma_k)/2.
struct PauliDecomposition {
  cplx scalar;
  PauliVector vector;
};

PauliDecomposition pauli_components(const Mat2& x);
Mat2 from_pauli(const PauliDecomposition& p);

/// exp(z (v . sigma)) = cosh(z w) I + sinh(z w)/w (v . sigma), w = sqrt(v . v).
Mat2 pauli_exp(cplx z, const PauliVector& v);

/// exp(z x) for an arbitrary 2x2 matrix via its Pauli decomposition.
Mat2 mat_exp(cplx z, const Mat2& x);

/// One step of s for H = a.sigma + b.sigma, i.e. A = -i a.sigma, B = -i b.sigma.
/// The b_1 factor is rightmost.
Mat2 apply_scheme_su2(const SplittingScheme& s, const Vec3& a, const Vec3& b, double h);

/// One step of s for arbitrary 2x2 generators: product of exp(coef h X).
Mat2 apply_scheme_generators(const SplittingScheme& s, const Mat2& gen_a, const Mat2& gen_b, cplx h);

/// Exact one-step propagator exp(-i h (a+b).sigma).
Mat2 exact_propagator(const Vec3& a, const Vec3& b, double h);

/// Eigenvalue moduli, larger first.
std::pair<double, double> eigenvalue_moduli(const Mat2& u);

inline constexpr double kUnitCircleSlack = 1e-10;

/// Smallest h in [h_lo, h_hi] (to tol) where the larger eigenvalue modulus
/// exceeds 1 + kUnitCircleSlack. Throws BracketError if the predicate is
/// already true at h_lo or still false at h_hi.
double critical_step(const SplittingScheme& s, const Vec3& a, const Vec3& b, double h_lo, double h_hi,
                     double tol = 1e-9);

/// Principal logarithm V = log(u) as scalar part and Pauli vector.
/// Throws BranchError when an eigenvalue is within 1e-8 of the negative real axis.
PauliDecomposition generator_log(const Mat2& u);

/// V = -i h (d.sigma + i c.sigma)
struct GeneratorDecomposition {
  Vec3 d{};
  Vec3 c{};
  double h = 0.0;
};

GeneratorDecomposition decompose_generator(const PauliDecomposition& log_u, double h);

/// exp(s C.sigma) U exp(-s C.sigma) is unitary for the kernel described by g.
struct Processor {
  Vec3 direction{};
  double s = 0.0;

  bool is_identity() const { return s == 0.0; }
  Mat2 forward() const;  ///< exp(s C.sigma)
  Mat2 inverse() const;  ///< exp(-s C.sigma)
};

Processor build_processor(const GeneratorDecomposition& g);

struct ConjugacyReport {
  double c_dot_d = 0.0;
  double c_norm = 0.0;
  double d_norm = 0.0;
  double unitarity_defect_before = 0.0;
  /// Empty when c.d != 0 (the construction does not apply).
  std::optional<double> unitarity_defect_after;
  std::optional<Processor> processor;
};

inline constexpr double kOrthogonalityTol = 1e-10;

ConjugacyReport verify_conjugate_unitarity(const SplittingScheme& s, const Vec3& a, const Vec3& b,
                                           double h);

struct Su2Sample {
  double t;
  double unitarity_error;  ///< | ||U_app||_2 - 1 |
  double two_norm_error;   ///< ||U_app - U_ex||_2
};

/// Iterates the one-step map n_steps times from U = I.
/// Throws InstabilityError once an entry exceeds 1e100.
std::vector<Su2Sample> evolve_su2(const SplittingScheme& s, const Vec3& a, const Vec3& b, double h,
                                  std::size_t n_steps);

/// Final-time 2-norm error only; n_steps = 0 compares I with U_ex(t_final).
double final_error_su2(const SplittingScheme& s, const Vec3& a, const Vec3& b, double t_final,
                       std::size_t n_steps);

/// || Re Psi(-h) Re Psi(h) - I ||_2 for real generators, each step projected
/// on its real part.
double pseudo_symmetry_defect(const SplittingScheme& s, const Mat2& gen_a, const Mat2& gen_b, double h);

/// Pauli matrices sigma_1, sigma_2, sigma_3.
const std::array<Mat2, 3>& pauli_matrices();

}  // namespace cxsplit::su2
