#include "cxsplit/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>

#include "cxsplit/errors.hpp"

namespace cxsplit {

namespace {

bool all_real(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx z) { return z.imag() == 0.0; });
}

cplx sum(std::span<const cplx> v) { return std::accumulate(v.begin(), v.end(), cplx{0.0, 0.0}); }

template <class Pred>
bool mirrored(std::span<const cplx> v, Pred pred) {
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (!pred(v[n - 1 - j], v[j])) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::palindromic:
      return "palindromic";
    case Structure::symmetric_conjugate:
      return "symmetric-conjugate";
    case Structure::none:
      return "none";
  }
  return "none";
}

Structure structure_from_string(std::string_view s) {
  if (s == "palindromic") return Structure::palindromic;
  if (s == "symmetric-conjugate") return Structure::symmetric_conjugate;
  if (s == "none") return Structure::none;
  throw LookupError("unknown structure '" + std::string(s) +
                    "' (expected palindromic, symmetric-conjugate or none)");
}

bool is_palindromic(std::span<const cplx> a, std::span<const cplx> b) {
  auto same = [](cplx x, cplx y) { return x == y; };
  return mirrored(a, same) && mirrored(b, same);
}

bool is_symmetric_conjugate(std::span<const cplx> a, std::span<const cplx> b) {
  auto conj_pair = [](cplx x, cplx y) { return x == std::conj(y); };
  return mirrored(a, conj_pair) && mirrored(b, conj_pair);
}

Structure detect_structure(std::span<const cplx> a, std::span<const cplx> b) {
  if (is_palindromic(a, b)) return Structure::palindromic;
  if (is_symmetric_conjugate(a, b)) return Structure::symmetric_conjugate;
  return Structure::none;
}

// ---------------------------------------------------------------------------

CompositionScheme::CompositionScheme(std::vector<cplx> gamma, int declared_order)
    : gamma_(std::move(gamma)), declared_order_(declared_order) {
  if (gamma_.empty()) throw ValidationError("composition needs at least one weight");
  const double residual = std::abs(sum(gamma_) - 1.0);
  if (residual > 1e-14) {
    throw ValidationError("composition weights must sum to 1 (residual " + std::to_string(residual) +
                          ")");
  }
}

SplittingScheme::SplittingScheme(std::string name, std::vector<cplx> a, std::vector<cplx> b,
                                 int declared_order, Structure structure)
    : name_(std::move(name)),
      a_(std::move(a)),
      b_(std::move(b)),
      declared_order_(declared_order),
      structure_(structure),
      a_realness_(all_real(a_) ? Realness::real : Realness::complex) {
  if (a_.empty()) throw ValidationError(name_ + ": a scheme needs at least one A-stage");
  if (b_.size() != a_.size() + 1) {
    throw ValidationError(name_ + ": expected " + std::to_string(a_.size() + 1) +
                          " b coefficients for " + std::to_string(a_.size()) + " a coefficients, got " +
                          std::to_string(b_.size()));
  }
  if (declared_order_ < 0) throw ValidationError(name_ + ": declared order must be non-negative");
  if (structure_ == Structure::palindromic && !is_palindromic(a_, b_)) {
    throw ValidationError(name_ + ": coefficients are not palindromic");
  }
  if (structure_ == Structure::symmetric_conjugate && !is_symmetric_conjugate(a_, b_)) {
    throw ValidationError(name_ + ": coefficients are not symmetric-conjugate");
  }
}

SplittingScheme SplittingScheme::with_name(std::string name) const {
  SplittingScheme copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

SplittingScheme SplittingScheme::with_declared_order(int order) const {
  SplittingScheme copy = *this;
  copy.declared_order_ = order;
  return copy;
}

SplittingScheme SplittingScheme::with_composition(CompositionScheme c) const {
  SplittingScheme copy = *this;
  copy.composition_ = std::move(c);
  return copy;
}

void SplittingScheme::validate_consistency(double tol) const {
  const double ra = std::abs(sum(a_) - 1.0);
  const double rb = std::abs(sum(b_) - 1.0);
  if (ra > tol || rb > tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: inconsistent coefficients (|sum a - 1| = %.3e, |sum b - 1| = %.3e)",
                  name_.c_str(), ra, rb);
    throw ValidationError(buf);
  }
}

// ---------------------------------------------------------------------------

CompositionScheme yoshida_triple() {
  const double g = 1.0 / (2.0 - std::cbrt(2.0));
  return CompositionScheme({g, 1.0 - 2.0 * g, g}, 4);
}

CompositionScheme palindromic_complex_triple(int k) {
  if (k != 1 && k != 2) throw LookupError("palindromic complex triple: branch k must be 1 or 2");
  const cplx root = std::polar(1.0, 2.0 * k * std::numbers::pi / 3.0);
  const cplx g = 1.0 / (2.0 - std::cbrt(2.0) * root);
  return CompositionScheme({g, 1.0 - 2.0 * g, g}, 4);
}

CompositionScheme symmetric_conjugate_triple() {
  const cplx g{0.25, 0.25 * std::sqrt(5.0 / 3.0)};
  return CompositionScheme({g, 0.5, std::conj(g)}, 4);
}

CompositionScheme symmetric_conjugate_pair() {
  const cplx alpha{0.5, std::sqrt(3.0) / 6.0};
  return CompositionScheme({alpha, std::conj(alpha)}, 3);
}

SplittingScheme gamma_to_ab(const CompositionScheme& c, StrangBase base, std::string name) {
  const auto g = c.gamma();
  const std::size_t m = g.size();
  std::vector<cplx> a;
  std::vector<cplx> b;
  if (base == StrangBase::strang_TV) {
    // exp(g/2 B) exp(g A) exp(g/2 B) per kernel; touching B halves merge.
    a.assign(g.begin(), g.end());
    b.reserve(m + 1);
    b.push_back(g[0] / 2.0);
    for (std::size_t j = 0; j + 1 < m; ++j) b.push_back((g[j] + g[j + 1]) / 2.0);
    b.push_back(g[m - 1] / 2.0);
  } else {
    // exp(g/2 A) exp(g B) exp(g/2 A) per kernel; touching A halves merge and
    // the B list is padded with empty outer stages.
    a.reserve(m + 1);
    a.push_back(g[0] / 2.0);
    for (std::size_t j = 0; j + 1 < m; ++j) a.push_back((g[j] + g[j + 1]) / 2.0);
    a.push_back(g[m - 1] / 2.0);
    b.reserve(m + 2);
    b.push_back(0.0);
    b.insert(b.end(), g.begin(), g.end());
    b.push_back(0.0);
  }
  const Structure st = detect_structure(a, b);
  return SplittingScheme(std::move(name), std::move(a), std::move(b), c.declared_order(), st)
      .with_composition(c);
}

SplittingScheme conjugate_scheme(const SplittingScheme& s) {
  std::vector<cplx> a(s.a().begin(), s.a().end());
  std::vector<cplx> b(s.b().begin(), s.b().end());
  for (auto& z : a) z = std::conj(z);
  for (auto& z : b) z = std::conj(z);
  SplittingScheme out("conj(" + s.name() + ")", std::move(a), std::move(b), s.declared_order(),
                      s.structure());
  if (s.composition()) {
    std::vector<cplx> g(s.composition()->gamma().begin(), s.composition()->gamma().end());
    for (auto& z : g) z = std::conj(z);
    out = out.with_composition(CompositionScheme(std::move(g), s.composition()->declared_order()));
  }
  return out;
}

SplittingScheme compose_half_steps(const SplittingScheme& s1, const SplittingScheme& s2) {
  std::vector<cplx> a;
  a.reserve(s1.stages() + s2.stages());
  for (cplx z : s2.a()) a.push_back(z / 2.0);
  for (cplx z : s1.a()) a.push_back(z / 2.0);

  std::vector<cplx> b;
  b.reserve(s1.b().size() + s2.b().size() - 1);
  const auto b2 = s2.b();
  const auto b1 = s1.b();
  for (std::size_t j = 0; j + 1 < b2.size(); ++j) b.push_back(b2[j] / 2.0);
  b.push_back((b2.back() + b1.front()) / 2.0);
  for (std::size_t j = 1; j < b1.size(); ++j) b.push_back(b1[j] / 2.0);

  const Structure st = detect_structure(a, b);
  return SplittingScheme(s1.name() + "*" + s2.name(), std::move(a), std::move(b),
                         std::min(s1.declared_order(), s2.declared_order()), st);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 12> kNames = {
    "lie_trotter", "strang_TV", "strang_VT", "yoshida4", "P_c_4",     "SC_c_3",
    "SC_c_4",      "SC_r_3",    "P_r_4",     "SC_r_4",   "Xi_SC_r_4", "Xi_P_r_4"};

SplittingScheme make_sc_r_3() {
  const double r = std::sqrt(59.0 / 2.0);
  const cplx b1{13.0 / 126.0, -r / 63.0};
  const cplx b2{25.0 / 63.0, 5.0 * r / 126.0};
  return SplittingScheme("SC_r_3", {0.3, 0.4, 0.3}, {b1, b2, std::conj(b2), std::conj(b1)}, 3,
                         Structure::symmetric_conjugate);
}

SplittingScheme make_p_r_4() {
  const cplx b1{1.0 / 10.0, -1.0 / 30.0};
  const cplx b2{4.0 / 15.0, 2.0 / 15.0};
  const cplx b3{4.0 / 15.0, -1.0 / 5.0};
  return SplittingScheme("P_r_4", {0.25, 0.25, 0.25, 0.25}, {b1, b2, b3, b2, b1}, 4,
                         Structure::palindromic);
}

SplittingScheme make_sc_r_4() {
  // Printed decimals, stored verbatim.
  const double a1 = 0.125;
  const double a2 = 0.23670501659941197298;
  const double a3 = 0.27658996680117605403;
  const cplx b1{0.03881396214419327198, -0.045572109263923104872};
  const cplx b2{0.19047619047619047619, 0.115462072300408741306};
  const cplx b3{0.27070984737961625182, -0.148322245509626403888};
  return SplittingScheme("SC_r_4", {a1, a2, a3, a2, a1},
                         {b1, b2, b3, std::conj(b3), std::conj(b2), std::conj(b1)}, 4,
                         Structure::symmetric_conjugate);
}

std::map<std::string_view, SplittingScheme> build_registry() {
  std::map<std::string_view, SplittingScheme> r;
  auto put = [&r](SplittingScheme s) {
    const auto it = std::find(kNames.begin(), kNames.end(), s.name());
    r.emplace(*it, std::move(s));
  };
  put(SplittingScheme("lie_trotter", {1.0}, {1.0, 0.0}, 1, Structure::none));
  put(SplittingScheme("strang_TV", {1.0}, {0.5, 0.5}, 2, Structure::palindromic));
  put(SplittingScheme("strang_VT", {0.5, 0.5}, {0.0, 1.0, 0.0}, 2, Structure::palindromic));
  put(gamma_to_ab(yoshida_triple(), StrangBase::strang_TV, "yoshida4"));
  put(gamma_to_ab(palindromic_complex_triple(1), StrangBase::strang_TV, "P_c_4"));
  put(gamma_to_ab(symmetric_conjugate_pair(), StrangBase::strang_TV, "SC_c_3"));
  put(gamma_to_ab(symmetric_conjugate_triple(), StrangBase::strang_TV, "SC_c_4"));
  const auto sc_r_3 = make_sc_r_3();
  const auto p_r_4 = make_p_r_4();
  put(sc_r_3);
  put(p_r_4);
  put(make_sc_r_4());
  put(compose_half_steps(p_r_4, conjugate_scheme(p_r_4)).with_name("Xi_SC_r_4"));
  put(compose_half_steps(sc_r_3, conjugate_scheme(sc_r_3)).with_name("Xi_P_r_4").with_declared_order(4));

  for (const auto& [name, s] : r) s.validate_consistency(1e-14);
  return r;
}

const std::map<std::string_view, SplittingScheme>& registry() {
  static const auto r = build_registry();
  return r;
}

}  // namespace

std::span<const std::string_view> registry_names() { return kNames; }

const SplittingScheme& registry_get(std::string_view name) {
  const auto& r = registry();
  if (auto it = r.find(name); it != r.end()) return it->second;
  std::string msg = "unknown scheme '" + std::string(name) + "'; valid identifiers:";
  for (auto n : kNames) msg += " " + std::string(n);
  throw LookupError(msg);
}

std::optional<CompositionScheme> registry_composition(std::string_view name) {
  return registry_get(name).composition();
}

// ---------------------------------------------------------------------------

cplx OrderConditionReport::residual(std::string_view label) const {
  for (const auto& [l, v] : residuals) {
    if (l == label) return v;
  }
  throw LookupError("no order condition labelled '" + std::string(label) + "'");
}

OrderConditionReport check_order_conditions(const SplittingScheme& s, double tol) {
  // The conditions are written for schemes whose first flow is an A-flow;
  // prepending an empty A-stage brings (b_1, a_1, ..., a_s, b_{s+1}) into that
  // layout with n = s + 1 stages of each kind.
  std::vector<cplx> alpha;
  alpha.reserve(s.stages() + 1);
  alpha.push_back(0.0);
  alpha.insert(alpha.end(), s.a().begin(), s.a().end());
  const auto beta = s.b();
  const std::size_t n = alpha.size();

  std::vector<cplx> prefix(n);  // sum_{j<=i} alpha_j
  std::vector<cplx> suffix(n);  // sum_{j>=i} beta_j
  std::partial_sum(alpha.begin(), alpha.end(), prefix.begin());
  std::partial_sum(beta.rbegin(), beta.rend(), suffix.rbegin());

  cplx sa{}, sb{}, o2{}, o3b{}, o3a{}, o4b{}, o4a{}, o4m{};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx c = prefix[i];
    const cplx d = suffix[i];
    sa += alpha[i];
    sb += beta[i];
    o2 += beta[i] * c;
    o3b += beta[i] * c * c;
    o3a += alpha[i] * d * d;
    o4b += beta[i] * c * c * c;
    o4a += alpha[i] * d * d * d;
    o4m += alpha[i] * alpha[i] * d * d;
    if (i >= 1) o4m += 2.0 * alpha[i] * prefix[i - 1] * d * d;
  }

  OrderConditionReport rep;
  rep.residuals = {
      {"order1_a", sa - 1.0},           {"order1_b", sb - 1.0},
      {"order2_ba", o2 - 0.5},          {"order3_baa", o3b - 1.0 / 3.0},
      {"order3_abb", o3a - 1.0 / 3.0},  {"order4_baaa", o4b - 0.25},
      {"order4_abbb", o4a - 0.25},      {"order4_aabb", o4m - 1.0 / 6.0},
  };

  constexpr std::array<std::size_t, 4> last_index_of_order = {1, 2, 4, 7};
  std::size_t idx = 0;
  for (int order = 1; order <= 4; ++order) {
    bool ok = true;
    for (; idx <= last_index_of_order[order - 1]; ++idx) {
      if (std::abs(rep.residuals[idx].second) >= tol) ok = false;
    }
    if (!ok) break;
    rep.satisfied_order = order;
  }
  if (s.composition()) rep.error_measure = composition_error_measure(*s.composition());
  return rep;
}

double composition_error_measure(const CompositionScheme& c) {
  cplx w{};
  for (cplx g : c.gamma()) w += g * g * g * g * g;
  return std::abs(w);
}

}  // namespace cxsplit
