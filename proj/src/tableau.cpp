#include "fcrk/tableau.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace fcrk {

namespace {

RationalPoly P(std::initializer_list<const char*> coeffs) {
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (const char* s : coeffs) c.push_back(parse_rational(s));
  return RationalPoly(std::move(c));
}

std::vector<Rational> C(std::initializer_list<const char*> values) {
  std::vector<Rational> c;
  for (const char* s : values) c.push_back(parse_rational(s));
  return c;
}

const RationalPoly kZero{};

// Stores the lower triangle row by row and pads to s×s.
std::vector<std::vector<RationalPoly>> square(std::size_t s, std::vector<std::vector<RationalPoly>> lower) {
  std::vector<std::vector<RationalPoly>> A(s, std::vector<RationalPoly>(s));
  for (std::size_t i = 0; i < lower.size() && i + 1 < s; ++i)
    for (std::size_t j = 0; j < lower[i].size(); ++j) A[i + 1][j] = lower[i][j];
  return A;
}

FcrkTableau make_fcrk3r() {
  FcrkTableau t;
  t.name = "fcrk3r";
  t.c = C({"0", "1/2", "2/3", "1"});
  t.A = square(4, {
      {P({"0", "1"})},
      {P({"0", "1", "-1"}), P({"0", "0", "1"})},
      {P({"0", "1", "-3/4"}), kZero, P({"0", "0", "3/4"})},
  });
  t.b = {P({"0", "1", "-5/4", "1/2"}), kZero, P({"0", "0", "9/4", "-3/2"}), P({"0", "0", "-1", "1"})};
  t.reuse = true;
  t.claimed_order = 3;
  return t;
}

FcrkTableau make_fcrk4r() {
  const RationalPoly a51 = P({"0", "1", "-202/105", "323/315"});
  const RationalPoly a53 = P({"0", "0", "5415/2324", "-6137/3486"});
  const RationalPoly a54 = P({"0", "0", "-2023/4980", "5491/7470"});
  FcrkTableau t;
  t.name = "fcrk4r";
  t.c = C({"0", "2/5", "7/19", "15/17", "5/14", "11/13", "1"});
  t.A = square(7, {
      {P({"0", "1"})},
      {P({"0", "1", "-5/4"}), P({"0", "0", "5/4"})},
      {P({"0", "1", "-5/4"}), P({"0", "0", "5/4"}), kZero},
      {a51, kZero, a53, a54},
      {a51, kZero, a53, a54, kZero},
      // The α² coefficient of a_71 is -219/110: it is the value for which the
      // row sums to α and a_71(1) = b_1(1).
      {P({"0", "1", "-219/110", "182/165"}), kZero, kZero, kZero, P({"0", "0", "1078/445", "-2548/1335"}),
       P({"0", "0", "-845/1958", "2366/2937"})},
  });
  t.b = {P({"0", "1", "-137/55", "401/165", "-91/110"}),
         kZero,
         kZero,
         kZero,
         P({"0", "0", "15092/4005", "-21952/4005", "8918/4005"}),
         P({"0", "0", "-10985/3916", "41743/5874", "-15379/3916"}),
         P({"0", "0", "55/36", "-73/18", "91/36"})};
  t.reuse = true;
  t.claimed_order = 4;
  return t;
}

FcrknTableau make_fcrkn3r() {
  FcrknTableau t;
  t.name = "fcrkn3r";
  t.c = C({"0", "1/2", "1"});
  t.A = {{P({"0", "0", "1/2"})}};
  t.b = {P({"0", "0", "1/2", "-1/3"}), P({"0", "0", "0", "1/3"})};
  t.bp = {P({"0", "1", "-3/2", "2/3"}), P({"0", "0", "2", "-4/3"}), P({"0", "0", "-1/2", "2/3"})};
  t.claimed_order = 3;
  return t;
}

FcrknTableau make_fcrkn4r() {
  FcrknTableau t;
  t.name = "fcrkn4r";
  t.c = C({"0", "4/11", "10/29", "9/11", "1"});
  t.A = {
      {P({"0", "0", "1/2"})},
      {P({"0", "0", "1/2", "-11/24"}), P({"0", "0", "0", "11/24"})},
      {P({"0", "0", "1/2", "-295/696"}), P({"0", "0", "0", "253/232"}), P({"0", "0", "0", "-2/3"})},
  };
  t.b = {P({"0", "0", "1/2", "-5209361/7811208", "4299619/15622416"}),
         P({"0", "0", "0", "960839/1446520", "-5770963/8679120"}),
         P({"0", "0", "0", "7/43", "7/43"}),
         P({"0", "0", "0", "-781726/4882005", "4431163/19528020"})};
  t.bp = {P({"0", "1", "-461/180", "23/9", "-319/360"}),
          kZero,
          P({"0", "0", "219501/57380", "-48778/8607", "268279/114760"}),
          P({"0", "0", "-6655/2718", "17303/2718", "-38599/10872"}),
          P({"0", "0", "45/38", "-371/114", "319/152"})};
  t.claimed_order = 4;
  return t;
}

void check_abscissae(const std::vector<Rational>& c, std::vector<Violation>& out) {
  if (!c.empty() && c.front() != 0)
    out.push_back({"first abscissa must be 0", 1, 0, "c_1 = " + to_string(c.front())});
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] < 0) out.push_back({"abscissae must be nonnegative", i + 1, 0, "c = " + to_string(c[i])});
}

void check_vanishes(const RationalPoly& p, const char* invariant, std::size_t i, std::size_t j,
                    std::vector<Violation>& out) {
  if (p.coeff(0) != 0) out.push_back({invariant, i, j, "constant term " + to_string(p.coeff(0))});
}

}  // namespace

const std::vector<RationalPoly>& FcrknTableau::row(std::size_t i) const {
  static const std::vector<RationalPoly> kEmpty;
  const std::size_t s = stages();
  if (i == 0) return kEmpty;
  if (i + 1 == s) return b;
  if (i - 1 < A.size()) return A[i - 1];
  throw std::out_of_range("FCRKN row index out of range");
}

RationalPoly FcrknTableau::a(std::size_t i, std::size_t j) const {
  const auto& r = row(i);
  return j < r.size() ? r[j] : RationalPoly{};
}

RationalPoly FcrknTableau::b_at(std::size_t i) const { return i < b.size() ? b[i] : RationalPoly{}; }

std::string_view method_name(MethodId id) {
  switch (id) {
    case MethodId::FCRK3R: return "fcrk3r";
    case MethodId::FCRK4R: return "fcrk4r";
    case MethodId::FCRKN3R: return "fcrkn3r";
    case MethodId::FCRKN4R: return "fcrkn4r";
  }
  return "?";
}

std::optional<MethodId> parse_method_id(std::string_view name) {
  for (MethodId id : kAllMethods) {
    const std::string_view n = method_name(id);
    if (n.size() != name.size()) continue;
    bool same = true;
    for (std::size_t k = 0; k < n.size(); ++k)
      if (std::tolower(static_cast<unsigned char>(name[k])) != n[k]) same = false;
    if (same) return id;
  }
  return std::nullopt;
}

FcrkTableau builtin_fcrk(MethodId id) {
  switch (id) {
    case MethodId::FCRK3R: return make_fcrk3r();
    case MethodId::FCRK4R: return make_fcrk4r();
    default: throw std::invalid_argument(std::string(method_name(id)) + " is not an FCRK method");
  }
}

FcrknTableau builtin_fcrkn(MethodId id) {
  switch (id) {
    case MethodId::FCRKN3R: return make_fcrkn3r();
    case MethodId::FCRKN4R: return make_fcrkn4r();
    default: throw std::invalid_argument(std::string(method_name(id)) + " is not an FCRKN method");
  }
}

Tableau builtin(MethodId id) {
  if (id == MethodId::FCRK3R || id == MethodId::FCRK4R) return builtin_fcrk(id);
  return builtin_fcrkn(id);
}

std::string Violation::to_string() const {
  std::ostringstream os;
  os << invariant;
  if (index != 0) {
    os << " (stage " << index;
    if (column != 0) os << ", column " << column;
    os << ")";
  }
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

std::vector<Violation> validate_structure(const FcrkTableau& t) {
  std::vector<Violation> out;
  const std::size_t s = t.stages();
  if (s == 0) {
    out.push_back({"tableau needs at least one stage", 0, 0, ""});
    return out;
  }
  if (t.b.size() != s) out.push_back({"b must have s entries", 0, 0, std::to_string(t.b.size()) + " given"});
  if (t.A.size() != s) out.push_back({"A must have s rows", 0, 0, std::to_string(t.A.size()) + " given"});
  check_abscissae(t.c, out);
  for (std::size_t i = 0; i < t.A.size(); ++i) {
    if (t.A[i].size() != s) {
      out.push_back({"A must have s columns", i + 1, 0, std::to_string(t.A[i].size()) + " given"});
      continue;
    }
    for (std::size_t j = 0; j < s; ++j) {
      if (j >= i && !t.A[i][j].is_zero())
        out.push_back({"A must be strictly lower triangular", i + 1, j + 1, t.A[i][j].to_string()});
      check_vanishes(t.A[i][j], "stage coefficients nonzero at α=0", i + 1, j + 1, out);
    }
  }
  for (std::size_t i = 0; i < t.b.size(); ++i) check_vanishes(t.b[i], "weights nonzero at α=0", i + 1, 0, out);

  if (t.reuse && t.b.size() == s && t.A.size() == s && t.A.back().size() == s) {
    if (t.c.back() != 1) out.push_back({"reuse requires c_s = 1", s, 0, "c_s = " + to_string(t.c.back())});
    const Rational one(1);
    for (std::size_t i = 0; i + 1 < s; ++i) {
      const Rational bi = t.b[i](one);
      const Rational ai = t.A[s - 1][i](one);
      if (bi != ai)
        out.push_back({"reuse requires b_i(1) = a_si(1)", i + 1, 0,
                       "b_i(1) = " + to_string(bi) + ", a_si(1) = " + to_string(ai)});
    }
    const Rational bs = t.b[s - 1](one);
    if (bs != 0) out.push_back({"reuse requires b_s(1) = 0", s, 0, "b_s(1) = " + to_string(bs)});
  }
  return out;
}

std::vector<Violation> validate_structure(const FcrknTableau& t) {
  std::vector<Violation> out;
  const std::size_t s = t.stages();
  if (s < 2) {
    out.push_back({"reuse tableau needs at least two stages", 0, 0, ""});
    return out;
  }
  if (t.A.size() != s - 2)
    out.push_back({"A must store rows 2..s-1", 0, 0, std::to_string(t.A.size()) + " rows given"});
  if (t.b.size() != s - 1) out.push_back({"b must have s-1 entries", 0, 0, std::to_string(t.b.size()) + " given"});
  if (t.bp.size() != s) out.push_back({"bp must have s entries", 0, 0, std::to_string(t.bp.size()) + " given"});
  check_abscissae(t.c, out);
  if (t.c.back() != 1) out.push_back({"reuse requires c_s = 1", s, 0, "c_s = " + to_string(t.c.back())});
  for (std::size_t k = 0; k < t.A.size(); ++k) {
    if (t.A[k].size() != k + 1)
      out.push_back({"row i must have i-1 entries", k + 2, 0, std::to_string(t.A[k].size()) + " given"});
    for (std::size_t j = 0; j < t.A[k].size(); ++j)
      check_vanishes(t.A[k][j], "stage coefficients nonzero at α=0", k + 2, j + 1, out);
  }
  for (std::size_t i = 0; i < t.b.size(); ++i) check_vanishes(t.b[i], "weights nonzero at α=0", i + 1, 0, out);
  for (std::size_t i = 0; i < t.bp.size(); ++i)
    check_vanishes(t.bp[i], "derivative weights nonzero at α=0", i + 1, 0, out);
  return out;
}

std::vector<Violation> validate_structure(const Tableau& t) {
  return std::visit([](const auto& x) { return validate_structure(x); }, t);
}

std::vector<Violation> derivative_consistency(const FcrknTableau& t) {
  std::vector<Violation> out;
  const Rational one(1);
  for (std::size_t i = 0; i < t.bp.size(); ++i) {
    const Rational lhs = t.bp[i].integral01();
    const Rational rhs = t.b_at(i)(one);
    if (lhs != rhs)
      out.push_back({"integral of b'_i over [0,1] differs from b_i(1)", i + 1, 0,
                     to_string(lhs) + " vs " + to_string(rhs)});
  }
  return out;
}

}  // namespace fcrk
