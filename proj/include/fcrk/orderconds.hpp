#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fcrk/tableau.hpp"

namespace fcrk {

/// Bivariate polynomial Σ c_{jk} α^j β^k with exact coefficients; zero terms
/// are never stored.
class BiPoly {
 public:
  using Key = std::pair<unsigned, unsigned>;  // (power of α, power of β)

  BiPoly() = default;
  /// u(α)·v(β)
  static BiPoly outer(const RationalPoly& u, const RationalPoly& v);

  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<Key, Rational>& terms() const noexcept { return terms_; }
  Rational operator()(const Rational& alpha, const Rational& beta) const;
  /// Fixes α and returns the remaining polynomial in β.
  RationalPoly at_alpha(const Rational& alpha) const;

  BiPoly& operator+=(const BiPoly& other);
  friend bool operator==(const BiPoly&, const BiPoly&) = default;
  std::string to_string() const;

 private:
  std::map<Key, Rational> terms_;
};

struct DefectPoly {
  enum class Kind { Gamma, GammaPrime, GammaStage, QuadratureQ };
  Kind kind;
  /// 1-based stage index for GammaStage, 0 otherwise.
  std::size_t stage = 0;
  int k = 0;
  RationalPoly poly;

  std::string id() const;
};

struct AbscissaGroup {
  Rational value;
  std::vector<std::size_t> stages;  // 0-based
};

/// Groups stages by equal abscissa; groups ordered by increasing value.
std::vector<AbscissaGroup> distinct_abscissae(const std::vector<Rational>& c);

/// Quadruple Γ_k (k = 2..p), Γ′_k (k = 1..p) and Γ_ik (k = 2..p, every stage).
/// Throws UnsupportedError for p > 5.
std::vector<DefectPoly> gamma_defects(const FcrknTableau& t, int p);

struct CouplingDefect {
  int order = 4;
  std::size_t group = 0;  // 1-based, groups ordered by abscissa
  Rational c_star;
  enum class Weights { b, bp } weight_row = Weights::bp;
  /// Inner sum Σ_j a_ij(β) c_j^e − β^{e+2}/d uses this exponent e.
  int exponent = 1;
  /// Polynomial in (α, β); in discrete mode α is fixed to 1 (only β terms).
  BiPoly poly2;
  /// c* = 0 groups impose nothing: their β-range is the single point 0, where
  /// every stage row vanishes.
  bool vacuous = false;

  bool holds() const { return vacuous || poly2.is_zero(); }
  std::string id() const;
};

enum class ConditionMode { uniform, discrete };

/// Coupling (stage-interaction) conditions entering at orders 4 and 5.
/// order 4: b′-weighted, e = 1. order 5: b′-weighted with e = 2 and
/// b-weighted with e = 1.
std::vector<CouplingDefect> coupling_defects(const FcrknTableau& t, int order,
                                             ConditionMode mode = ConditionMode::uniform);

struct OrderReport {
  int uniform_u = 0;
  int discrete_u = 0;
  std::optional<int> uniform_du;
  std::optional<int> discrete_du;
  /// Highest order the checker looks at.
  int max_checked = 5;
  /// FCRK reports only cover quadrature-type conditions.
  bool necessary_only = false;
  /// FCRK with reuse: quadrature orders of the last stage row read as weights.
  std::optional<int> reuse_row_uniform;
  std::optional<int> reuse_row_discrete;
  /// First failing condition per reported order, with the nonzero defect.
  std::vector<std::string> failures;

  /// Claimed order p is certified when the uniform orders (u and, for FCRKN,
  /// u′) reach p and, for FCRK reuse, the reuse row has uniform order p-1 and
  /// discrete order p.
  bool certifies(int p) const;
  std::string to_string() const;
};

OrderReport verify_fcrkn_order(const FcrknTableau& t);
OrderReport verify_fcrk_quadrature(const FcrkTableau& t);
OrderReport verify_order(const Tableau& t);

}  // namespace fcrk
