#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fcrk/poly.hpp"

namespace fcrk {

/// Explicit functional continuous Runge–Kutta tableau (A(α), b(α), c) for
/// first-order RFDEs. `A` is stored as full s×s rows; entries on and above the
/// diagonal must be the zero polynomial.
struct FcrkTableau {
  std::string name;
  std::vector<Rational> c;
  std::vector<std::vector<RationalPoly>> A;
  std::vector<RationalPoly> b;
  /// Last stage (c_s = 1) is adopted as the first stage of the next step.
  bool reuse = false;
  /// Order the tableau is designed for; 0 when unknown (user files).
  int claimed_order = 0;

  std::size_t stages() const noexcept { return c.size(); }
  friend bool operator==(const FcrkTableau&, const FcrkTableau&) = default;
};

/// Explicit FCRKN tableau in reuse form for ü = f(t, u_t).
///
/// Stage s sits at c_s = 1 and uses the `b` row as its coefficient row, so
/// only rows 2..s-1 are stored in `A` (`A[k]` is the row of stage k+2 and has
/// k+1 entries). `b` has s-1 entries and `bp` has s entries.
struct FcrknTableau {
  std::string name;
  std::vector<Rational> c;
  std::vector<std::vector<RationalPoly>> A;
  std::vector<RationalPoly> b;
  std::vector<RationalPoly> bp;
  int claimed_order = 0;

  std::size_t stages() const noexcept { return c.size(); }
  /// Coefficient row of stage i (0-based), with the b row aliased for the
  /// last stage. Row 0 is empty.
  const std::vector<RationalPoly>& row(std::size_t i) const;
  /// a_ij(α) with zero outside the stored triangle (0-based indices).
  RationalPoly a(std::size_t i, std::size_t j) const;
  /// b_i(α), zero for the last stage.
  RationalPoly b_at(std::size_t i) const;

  friend bool operator==(const FcrknTableau&, const FcrknTableau&) = default;
};

using Tableau = std::variant<FcrkTableau, FcrknTableau>;

enum class MethodId { FCRK3R, FCRK4R, FCRKN3R, FCRKN4R };

/// Lower-case CLI name ("fcrk3r", ...).
std::string_view method_name(MethodId id);
std::optional<MethodId> parse_method_id(std::string_view name);
inline constexpr MethodId kAllMethods[] = {MethodId::FCRK3R, MethodId::FCRK4R,
                                           MethodId::FCRKN3R, MethodId::FCRKN4R};

/// Built-in reuse methods of orders 3 and 4.
Tableau builtin(MethodId id);
FcrkTableau builtin_fcrk(MethodId id);
FcrknTableau builtin_fcrkn(MethodId id);

struct Violation {
  std::string invariant;
  /// 1-based stage index (or row index) the violation refers to; 0 if global.
  std::size_t index = 0;
  /// Second 1-based index for matrix entries; 0 if unused.
  std::size_t column = 0;
  std::string detail;

  std::string to_string() const;
};

std::vector<Violation> validate_structure(const FcrkTableau& t);
std::vector<Violation> validate_structure(const FcrknTableau& t);
std::vector<Violation> validate_structure(const Tableau& t);

/// Checks ∫₀¹ b'_i(α) dα = b_i(1) (b_s(1) read as 0) for every stage. The
/// identity makes η′ integrate to η across a step; it is not needed for the
/// order of the method and is reported separately from structure.
std::vector<Violation> derivative_consistency(const FcrknTableau& t);

}  // namespace fcrk
