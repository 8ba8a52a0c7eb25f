#include "cxsplit/su2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cxsplit/errors.hpp"

namespace cxsplit::su2 {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kOverflow = 1e100;

}  // namespace

double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

Vec3 cross(const Vec3& x, const Vec3& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

double norm(const Vec3& x) { return std::sqrt(dot(x, x)); }

double Mat2::frobenius() const {
  double s = 0.0;
  for (const auto& z : m) s += std::norm(z);
  return std::sqrt(s);
}

double Mat2::max_abs() const {
  double s = 0.0;
  for (const auto& z : m) s = std::max(s, std::abs(z));
  return s;
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return Mat2{{x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
               x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]}};
}

Mat2 operator+(const Mat2& x, const Mat2& y) {
  return Mat2{{x.m[0] + y.m[0], x.m[1] + y.m[1], x.m[2] + y.m[2], x.m[3] + y.m[3]}};
}

Mat2 operator-(const Mat2& x, const Mat2& y) {
  return Mat2{{x.m[0] - y.m[0], x.m[1] - y.m[1], x.m[2] - y.m[2], x.m[3] - y.m[3]}};
}

Mat2 operator*(cplx z, const Mat2& x) { return Mat2{{z * x.m[0], z * x.m[1], z * x.m[2], z * x.m[3]}}; }

double spectral_norm(const Mat2& x) {
  // Largest eigenvalue of the Hermitian G = x^dagger x, written so that a
  // near-unitary x does not lose digits to cancellation.
  const Mat2 g = x.adjoint() * x;
  const double mean = 0.5 * (g.m[0].real() + g.m[3].real());
  const double half_gap = 0.5 * (g.m[0].real() - g.m[3].real());
  return std::sqrt(mean + std::hypot(half_gap, std::abs(g.m[1])));
}

double unitarity_defect(const Mat2& u) { return (u.adjoint() * u - Mat2::identity()).frobenius(); }

const std::array<Mat2, 3>& pauli_matrices() {
  static const std::array<Mat2, 3> s = {
      Mat2{{0.0, 1.0, 1.0, 0.0}},
      Mat2{{0.0, -I, I, 0.0}},
      Mat2{{1.0, 0.0, 0.0, -1.0}},
  };
  return s;
}

Mat2 PauliVector::to_matrix() const {
  // [[v3, v1 - i v2], [v1 + i v2, -v3]]
  return Mat2{{v[2], v[0] - I * v[1], v[0] + I * v[1], -v[2]}};
}

PauliDecomposition pauli_components(const Mat2& x) {
  PauliDecomposition p;
  p.scalar = 0.5 * (x(0, 0) + x(1, 1));
  p.vector.v[0] = 0.5 * (x(0, 1) + x(1, 0));
  p.vector.v[1] = 0.5 * I * (x(0, 1) - x(1, 0));
  p.vector.v[2] = 0.5 * (x(0, 0) - x(1, 1));
  return p;
}

Mat2 from_pauli(const PauliDecomposition& p) { return p.scalar * Mat2::identity() + p.vector.to_matrix(); }

Mat2 pauli_exp(cplx z, const PauliVector& v) {
  const cplx w = std::sqrt(v.self_dot());
  const Mat2 vs = v.to_matrix();
  if (w == 0.0) {
    // (v.sigma)^2 = 0, so the series stops after the linear term.
    return Mat2::identity() + z * vs;
  }
  return std::cosh(z * w) * Mat2::identity() + (std::sinh(z * w) / w) * vs;
}

Mat2 mat_exp(cplx z, const Mat2& x) {
  const PauliDecomposition p = pauli_components(x);
  return std::exp(z * p.scalar) * pauli_exp(z, p.vector);
}

Mat2 apply_scheme_su2(const SplittingScheme& s, const Vec3& a, const Vec3& b, double h) {
  const PauliVector va = PauliVector::from_real(a);
  const PauliVector vb = PauliVector::from_real(b);
  const auto ca = s.a();
  const auto cb = s.b();
  Mat2 u = pauli_exp(-I * cb[0] * h, vb);
  for (std::size_t j = 0; j < ca.size(); ++j) {
    u = pauli_exp(-I * ca[j] * h, va) * u;
    u = pauli_exp(-I * cb[j + 1] * h, vb) * u;
  }
  return u;
}

Mat2 apply_scheme_generators(const SplittingScheme& s, const Mat2& gen_a, const Mat2& gen_b, cplx h) {
  const auto ca = s.a();
  const auto cb = s.b();
  Mat2 u = mat_exp(cb[0] * h, gen_b);
  for (std::size_t j = 0; j < ca.size(); ++j) {
    u = mat_exp(ca[j] * h, gen_a) * u;
    u = mat_exp(cb[j + 1] * h, gen_b) * u;
  }
  return u;
}

Mat2 exact_propagator(const Vec3& a, const Vec3& b, double h) {
  return pauli_exp(-I * h, PauliVector::from_real({a[0] + b[0], a[1] + b[1], a[2] + b[2]}));
}

std::pair<double, double> eigenvalue_moduli(const Mat2& u) {
  const cplx t = u.trace();
  const cplx d = u.det();
  const cplx r = std::sqrt(t * t - 4.0 * d);
  // Pick the root without cancellation, recover the other from the product.
  cplx l1 = std::abs(t + r) >= std::abs(t - r) ? 0.5 * (t + r) : 0.5 * (t - r);
  cplx l2 = l1 != 0.0 ? d / l1 : 0.5 * (t - r);
  double m1 = std::abs(l1);
  double m2 = std::abs(l2);
  if (m2 > m1) std::swap(m1, m2);
  return {m1, m2};
}

double critical_step(const SplittingScheme& s, const Vec3& a, const Vec3& b, double h_lo, double h_hi,
                     double tol) {
  auto off_circle = [&](double h) {
    return eigenvalue_moduli(apply_scheme_su2(s, a, b, h)).first > 1.0 + kUnitCircleSlack;
  };
  if (!(h_lo < h_hi)) throw BracketError("critical_step: empty bracket");
  if (off_circle(h_lo)) {
    throw BracketError(s.name() + ": eigenvalues already off the unit circle at h = " + std::to_string(h_lo));
  }
  if (!off_circle(h_hi)) {
    throw BracketError(s.name() + ": eigenvalues stay on the unit circle up to h = " + std::to_string(h_hi));
  }
  double lo = h_lo;
  double hi = h_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (off_circle(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

PauliDecomposition generator_log(const Mat2& u) {
  const PauliDecomposition p = pauli_components(u);
  const cplx m0 = p.scalar;
  const cplx w = std::sqrt(p.vector.self_dot());
  const cplx lp = m0 + w;
  const cplx lm = m0 - w;
  for (const cplx l : {lp, lm}) {
    if (std::abs(l) == 0.0 || (l.real() < 0.0 && std::abs(l.imag()) <= 1e-8)) {
      throw BranchError("principal logarithm undefined: eigenvalue near the negative real axis; use a smaller h");
    }
  }
  const cplx log_p = std::log(lp);
  const cplx log_m = std::log(lm);

  cplx f;  // log(u) = scalar I + f (m . sigma)
  const cplx z = w / m0;
  if (std::abs(z) < 1e-2) {
    // atanh(z)/(z m0) without the cancellation in log_p - log_m.
    const cplx z2 = z * z;
    f = (1.0 + z2 * (1.0 / 3.0 + z2 * (1.0 / 5.0 + z2 * (1.0 / 7.0 + z2 / 9.0)))) / m0;
  } else {
    f = (log_p - log_m) / (2.0 * w);
  }
  PauliDecomposition out;
  out.scalar = 0.5 * (log_p + log_m);
  for (int k = 0; k < 3; ++k) out.vector.v[k] = f * p.vector.v[k];
  return out;
}

GeneratorDecomposition decompose_generator(const PauliDecomposition& log_u, double h) {
  if (std::abs(log_u.scalar) > 1e-12) {
    throw ValidationError("decompose_generator: generator has a non-negligible trace part");
  }
  if (!(h > 0.0)) throw ValidationError("decompose_generator: h must be positive");
  GeneratorDecomposition g;
  g.h = h;
  for (int k = 0; k < 3; ++k) {
    g.d[k] = -log_u.vector.v[k].imag() / h;
    g.c[k] = log_u.vector.v[k].real() / h;
  }
  return g;
}

Mat2 Processor::forward() const { return pauli_exp(s, PauliVector::from_real(direction)); }
Mat2 Processor::inverse() const { return pauli_exp(-s, PauliVector::from_real(direction)); }

Processor build_processor(const GeneratorDecomposition& g) {
  const double nc = norm(g.c);
  const double nd = norm(g.d);
  if (nc <= 16.0 * std::numeric_limits<double>::epsilon() * nd) return Processor{};
  if (nc >= nd) {
    throw InstabilityError("no unitary conjugate: ||c|| >= ||d|| (step too large)");
  }
  const Vec3 dc = cross(g.d, g.c);
  const double ndc = norm(dc);
  if (ndc <= 16.0 * std::numeric_limits<double>::epsilon() * nc * nd) {
    throw ValidationError("build_processor: c is parallel to d");
  }
  Processor p;
  p.direction = {dc[0] / ndc, dc[1] / ndc, dc[2] / ndc};
  p.s = 0.5 * std::atanh(-nc / nd);
  return p;
}

ConjugacyReport verify_conjugate_unitarity(const SplittingScheme& s, const Vec3& a, const Vec3& b,
                                           double h) {
  const Mat2 u = apply_scheme_su2(s, a, b, h);
  const GeneratorDecomposition g = decompose_generator(generator_log(u), h);
  ConjugacyReport rep;
  rep.c_dot_d = dot(g.c, g.d);
  rep.c_norm = norm(g.c);
  rep.d_norm = norm(g.d);
  rep.unitarity_defect_before = unitarity_defect(u);
  if (std::abs(rep.c_dot_d) > kOrthogonalityTol) return rep;

  const Processor p = build_processor(g);
  rep.processor = p;
  rep.unitarity_defect_after = unitarity_defect(p.forward() * u * p.inverse());
  return rep;
}

std::vector<Su2Sample> evolve_su2(const SplittingScheme& s, const Vec3& a, const Vec3& b, double h,
                                  std::size_t n_steps) {
  if (n_steps < 1) throw ValidationError("evolve_su2: n_steps must be >= 1");
  const Mat2 step = apply_scheme_su2(s, a, b, h);
  std::vector<Su2Sample> out;
  out.reserve(n_steps);
  Mat2 u = Mat2::identity();
  for (std::size_t n = 1; n <= n_steps; ++n) {
    u = step * u;
    if (!(u.max_abs() <= kOverflow)) {
      throw InstabilityError(s.name() + ": SU(2) iteration overflow after " + std::to_string(n) + " steps");
    }
    const double t = static_cast<double>(n) * h;
    out.push_back({t, std::abs(spectral_norm(u) - 1.0), spectral_norm(u - exact_propagator(a, b, t))});
  }
  return out;
}

double final_error_su2(const SplittingScheme& s, const Vec3& a, const Vec3& b, double t_final,
                       std::size_t n_steps) {
  Mat2 u = Mat2::identity();
  if (n_steps > 0) {
    const double h = t_final / static_cast<double>(n_steps);
    const Mat2 step = apply_scheme_su2(s, a, b, h);
    for (std::size_t n = 0; n < n_steps; ++n) {
      u = step * u;
      if (!(u.max_abs() <= kOverflow)) throw InstabilityError(s.name() + ": SU(2) iteration overflow");
    }
  }
  return spectral_norm(u - exact_propagator(a, b, t_final));
}

double pseudo_symmetry_defect(const SplittingScheme& s, const Mat2& gen_a, const Mat2& gen_b, double h) {
  auto real_part = [](const Mat2& x) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = x.m[i].real();
    return r;
  };
  const Mat2 fwd = real_part(apply_scheme_generators(s, gen_a, gen_b, h));
  const Mat2 bwd = real_part(apply_scheme_generators(s, gen_a, gen_b, -h));
  return spectral_norm(bwd * fwd - Mat2::identity());
}

}  // namespace cxsplit::su2
