#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cxsplit {

using cplx = std::complex<double>;

enum class Structure { palindromic, symmetric_conjugate, none };
enum class Realness { real, complex };

std::string_view to_string(Structure s);
Structure structure_from_string(std::string_view s);

/// Weights gamma_j of a composition S(gamma_m h) ... S(gamma_1 h) of a
/// symmetric second-order kernel S. gamma_1 is applied first.
class CompositionScheme {
 public:
  CompositionScheme(std::vector<cplx> gamma, int declared_order);

  std::span<const cplx> gamma() const noexcept { return gamma_; }
  int declared_order() const noexcept { return declared_order_; }

 private:
  std::vector<cplx> gamma_;
  int declared_order_;
};

/// Splitting method exp(b_{s+1} hB) exp(a_s hA) ... exp(a_1 hA) exp(b_1 hB).
///
/// Stored in application order: b_1 acts first. The constructor checks the
/// shape (|b| = |a| + 1, s >= 1) and the declared structural tag, which must
/// hold coefficient-wise without tolerance. Consistency (sum a = sum b = 1) is
/// deliberately not enforced here so that arbitrary coefficient sets can be
/// inspected; see validate_consistency().
class SplittingScheme {
 public:
  SplittingScheme(std::string name, std::vector<cplx> a, std::vector<cplx> b, int declared_order,
                  Structure structure);

  const std::string& name() const noexcept { return name_; }
  std::span<const cplx> a() const noexcept { return a_; }
  std::span<const cplx> b() const noexcept { return b_; }
  std::size_t stages() const noexcept { return a_.size(); }
  int declared_order() const noexcept { return declared_order_; }
  Structure structure() const noexcept { return structure_; }
  Realness a_realness() const noexcept { return a_realness_; }

  /// Present when the scheme was produced by gamma_to_ab.
  const std::optional<CompositionScheme>& composition() const noexcept { return composition_; }

  SplittingScheme with_name(std::string name) const;
  SplittingScheme with_declared_order(int order) const;
  SplittingScheme with_composition(CompositionScheme c) const;

  /// Throws ValidationError when |sum a - 1| or |sum b - 1| exceeds tol.
  void validate_consistency(double tol = 1e-14) const;

  friend bool operator==(const SplittingScheme& x, const SplittingScheme& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  std::string name_;
  std::vector<cplx> a_;
  std::vector<cplx> b_;
  int declared_order_;
  Structure structure_;
  Realness a_realness_;
  std::optional<CompositionScheme> composition_;
};

/// Strongest structural tag the coefficients satisfy exactly. Palindromic wins
/// over symmetric-conjugate when both hold (real palindromic schemes).
Structure detect_structure(std::span<const cplx> a, std::span<const cplx> b);

bool is_palindromic(std::span<const cplx> a, std::span<const cplx> b);
bool is_symmetric_conjugate(std::span<const cplx> a, std::span<const cplx> b);

// ---------------------------------------------------------------------------
// Catalogue

std::span<const std::string_view> registry_names();

/// Throws LookupError listing the valid identifiers.
const SplittingScheme& registry_get(std::string_view name);

/// Composition weights behind the gamma-form registry entries
/// (yoshida4, P_c_4, SC_c_4, SC_c_3).
std::optional<CompositionScheme> registry_composition(std::string_view name);

CompositionScheme yoshida_triple();
/// Complex time-symmetric triple; branch k in {1, 2}.
CompositionScheme palindromic_complex_triple(int k = 1);
/// gamma_1 = conj(gamma_3) = 1/4 + i sqrt(5/3)/4, gamma_2 = 1/2.
CompositionScheme symmetric_conjugate_triple();
/// (alpha, conj(alpha)) with alpha = 1/2 + i sqrt(3)/6.
CompositionScheme symmetric_conjugate_pair();

// ---------------------------------------------------------------------------
// Transformations

enum class StrangBase { strang_TV, strang_VT };

/// Merge a composition of Strang kernels into a single splitting.
SplittingScheme gamma_to_ab(const CompositionScheme& c, StrangBase base = StrangBase::strang_TV,
                            std::string name = "composition");

/// Every coefficient complex-conjugated.
SplittingScheme conjugate_scheme(const SplittingScheme& s);

/// s2 at tau/2 followed by s1 at tau/2; the touching B-exponentials are merged.
SplittingScheme compose_half_steps(const SplittingScheme& s1, const SplittingScheme& s2);

// ---------------------------------------------------------------------------
// Order conditions

struct OrderConditionReport {
  /// Residuals in the order they are listed: order1_a, order1_b, order2_ba,
  /// order3_baa, order3_abb, order4_baaa, order4_abbb, order4_aabb.
  std::vector<std::pair<std::string, cplx>> residuals;
  int satisfied_order = 0;
  /// |omega_{5,1}| when the scheme carries its composition weights.
  std::optional<double> error_measure;

  cplx residual(std::string_view label) const;
};

OrderConditionReport check_order_conditions(const SplittingScheme& s, double tol = 1e-12);

/// |sum_j gamma_j^5|
double composition_error_measure(const CompositionScheme& c);

}  // namespace cxsplit
