#include "fcrk/orderconds.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "fcrk/errors.hpp"

namespace fcrk {

namespace {

Rational rpow(const Rational& x, int e) {
  Rational r = 1;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

Rational factorial(int n) {
  Rational r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Σ_i w_i(α) c_i^e − α^k / d
RationalPoly weighted_defect(const std::vector<RationalPoly>& w, const std::vector<Rational>& c, int e, int k,
                             const Rational& d) {
  RationalPoly sum;
  for (std::size_t i = 0; i < w.size() && i < c.size(); ++i) sum += w[i] * rpow(c[i], e);
  sum -= RationalPoly::monomial(static_cast<std::size_t>(k), Rational(1) / d);
  return sum;
}

std::vector<RationalPoly> padded_b(const FcrknTableau& t) {
  std::vector<RationalPoly> b(t.stages());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = t.b_at(i);
  return b;
}

RationalPoly gamma(const FcrknTableau& t, int k) {
  return weighted_defect(padded_b(t), t.c, k - 2, k, Rational(k * (k - 1))) * (Rational(1) / factorial(k - 2));
}

RationalPoly gamma_prime(const FcrknTableau& t, int k) {
  return weighted_defect(t.bp, t.c, k - 1, k, Rational(k)) * (Rational(1) / factorial(k - 1));
}

RationalPoly gamma_stage(const FcrknTableau& t, std::size_t i, int k) {
  return weighted_defect(t.row(i), t.c, k - 2, k, Rational(k * (k - 1))) * (Rational(1) / factorial(k - 2));
}

// A stage defect only has to vanish on [0, c_i]; for c_i = 0 that is α = 0.
bool stage_holds(const RationalPoly& p, const Rational& ci) { return ci == 0 ? p.coeff(0) == 0 : p.is_zero(); }

struct Condition {
  int level;
  bool for_u;
  bool for_du;
  std::string id;
  bool uniform_ok;
  bool discrete_ok;
  std::string uniform_detail;
  std::string discrete_detail;
};

Condition univariate(int level, bool u, bool du, std::string id, const RationalPoly& p) {
  const Rational at1 = p(Rational(1));
  return {level,          u,  du, std::move(id), p.is_zero(), at1 == 0, p.is_zero() ? "" : p.to_string(),
          at1 == 0 ? "" : to_string(at1)};
}

struct Orders {
  int order = 0;
  std::string failure;
};

Orders highest(const std::vector<Condition>& conds, bool du, bool discrete, int max_level) {
  Orders out;
  for (int p = 1; p <= max_level; ++p) {
    for (const Condition& c : conds) {
      if (c.level != p || !(du ? c.for_du : c.for_u)) continue;
      if (!(discrete ? c.discrete_ok : c.uniform_ok)) {
        out.failure = c.id + " = " + (discrete ? c.discrete_detail : c.uniform_detail);
        return out;
      }
    }
    out.order = p;
  }
  return out;
}

void note(OrderReport& r, const char* what, const Orders& o) {
  if (!o.failure.empty())
    r.failures.push_back(std::string(what) + " order " + std::to_string(o.order + 1) + ": " + o.failure);
}

}  // namespace

// ---------------------------------------------------------------------------
// BiPoly

BiPoly BiPoly::outer(const RationalPoly& u, const RationalPoly& v) {
  BiPoly out;
  for (std::size_t j = 0; j < u.coeffs().size(); ++j) {
    if (u.coeffs()[j] == 0) continue;
    for (std::size_t k = 0; k < v.coeffs().size(); ++k) {
      if (v.coeffs()[k] == 0) continue;
      out.terms_[{static_cast<unsigned>(j), static_cast<unsigned>(k)}] = u.coeffs()[j] * v.coeffs()[k];
    }
  }
  return out;
}

BiPoly& BiPoly::operator+=(const BiPoly& other) {
  for (const auto& [key, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Rational BiPoly::operator()(const Rational& alpha, const Rational& beta) const {
  Rational sum = 0;
  for (const auto& [key, c] : terms_) sum += c * rpow(alpha, static_cast<int>(key.first)) * rpow(beta, static_cast<int>(key.second));
  return sum;
}

RationalPoly BiPoly::at_alpha(const Rational& alpha) const {
  std::vector<Rational> c;
  for (const auto& [key, v] : terms_) {
    if (c.size() <= key.second) c.resize(key.second + 1);
    c[key.second] += v * rpow(alpha, static_cast<int>(key.first));
  }
  return RationalPoly(std::move(c));
}

std::string BiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    const Rational mag = c < 0 ? Rational(-c) : c;
    os << fcrk::to_string(mag);
    if (key.first > 0) os << "*a" << (key.first > 1 ? "^" + std::to_string(key.first) : "");
    if (key.second > 0) os << "*b" << (key.second > 1 ? "^" + std::to_string(key.second) : "");
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::string DefectPoly::id() const {
  switch (kind) {
    case Kind::Gamma: return "Gamma_" + std::to_string(k);
    case Kind::GammaPrime: return "Gamma'_" + std::to_string(k);
    case Kind::GammaStage: return "Gamma_{" + std::to_string(stage) + "," + std::to_string(k) + "}";
    case Kind::QuadratureQ: return "Q_" + std::to_string(k);
  }
  return "?";
}

std::string CouplingDefect::id() const {
  std::ostringstream os;
  os << "Delta" << (weight_row == Weights::bp ? "'" : "") << "[order " << order << ", group " << group
     << " (c*=" << to_string(c_star) << "), e=" << exponent << "]";
  return os.str();
}

std::vector<AbscissaGroup> distinct_abscissae(const std::vector<Rational>& c) {
  std::vector<AbscissaGroup> groups;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const AbscissaGroup& g) { return g.value == c[i]; });
    if (it == groups.end())
      groups.push_back({c[i], {i}});
    else
      it->stages.push_back(i);
  }
  std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
  return groups;
}

std::vector<DefectPoly> gamma_defects(const FcrknTableau& t, int p) {
  if (p > 5) throw UnsupportedError("order conditions are available up to order 5");
  std::vector<DefectPoly> out;
  for (int k = 2; k <= p; ++k) out.push_back({DefectPoly::Kind::Gamma, 0, k, gamma(t, k)});
  for (int k = 1; k <= p; ++k) out.push_back({DefectPoly::Kind::GammaPrime, 0, k, gamma_prime(t, k)});
  for (int k = 2; k <= p; ++k)
    for (std::size_t i = 0; i < t.stages(); ++i)
      out.push_back({DefectPoly::Kind::GammaStage, i + 1, k, gamma_stage(t, i, k)});
  return out;
}

std::vector<CouplingDefect> coupling_defects(const FcrknTableau& t, int order, ConditionMode mode) {
  if (order != 4 && order != 5) throw UnsupportedError("coupling conditions exist for orders 4 and 5");
  struct Family {
    CouplingDefect::Weights weights;
    int e;
  };
  std::vector<Family> families;
  if (order == 4)
    families = {{CouplingDefect::Weights::bp, 1}};
  else
    families = {{CouplingDefect::Weights::bp, 2}, {CouplingDefect::Weights::b, 1}};

  const auto groups = distinct_abscissae(t.c);
  const auto b = padded_b(t);
  std::vector<CouplingDefect> out;
  for (const Family& f : families) {
    const Rational d = f.e == 1 ? Rational(6) : Rational(12);
    for (std::size_t m = 0; m < groups.size(); ++m) {
      CouplingDefect def;
      def.order = order;
      def.group = m + 1;
      def.c_star = groups[m].value;
      def.weight_row = f.weights;
      def.exponent = f.e;
      def.vacuous = groups[m].value == 0;
      for (std::size_t i : groups[m].stages) {
        RationalPoly w = f.weights == CouplingDefect::Weights::bp ? t.bp[i] : b[i];
        if (mode == ConditionMode::discrete) w = RationalPoly::constant(w(Rational(1)));
        const RationalPoly inner = weighted_defect(t.row(i), t.c, f.e, f.e + 2, d);
        def.poly2 += BiPoly::outer(w, inner);
      }
      out.push_back(std::move(def));
    }
  }
  return out;
}

OrderReport verify_fcrkn_order(const FcrknTableau& t) {
  std::vector<Condition> conds;
  for (int k = 1; k <= 5; ++k) conds.push_back(univariate(k, false, true, "Gamma'_" + std::to_string(k), gamma_prime(t, k)));
  // Assumption block of the order theorems: uniform order one for u′ and
  // uniform order two for η and every stage function.
  conds.push_back(univariate(2, true, false, "Gamma'_1", gamma_prime(t, 1)));
  for (int k = 2; k <= 5; ++k) conds.push_back(univariate(k, true, false, "Gamma_" + std::to_string(k), gamma(t, k)));
  for (std::size_t i = 0; i < t.stages(); ++i) {
    const RationalPoly g = gamma_stage(t, i, 2);
    const bool ok = stage_holds(g, t.c[i]);
    conds.push_back({2, true, true, "Gamma_{" + std::to_string(i + 1) + ",2}", ok, ok, g.to_string(), g.to_string()});
  }
  for (int order : {4, 5}) {
    const auto uni = coupling_defects(t, order, ConditionMode::uniform);
    const auto dis = coupling_defects(t, order, ConditionMode::discrete);
    for (std::size_t n = 0; n < uni.size(); ++n) {
      const bool du = uni[n].weight_row == CouplingDefect::Weights::bp;
      conds.push_back({order, !du, du, uni[n].id(), uni[n].holds(), dis[n].holds(), uni[n].poly2.to_string(),
                       dis[n].poly2.to_string()});
    }
  }

  OrderReport r;
  const Orders uu = highest(conds, false, false, 5);
  const Orders du = highest(conds, true, false, 5);
  const Orders ud = highest(conds, false, true, 5);
  const Orders dd = highest(conds, true, true, 5);
  r.uniform_u = uu.order;
  r.uniform_du = du.order;
  r.discrete_u = ud.order;
  r.discrete_du = dd.order;
  note(r, "uniform u", uu);
  note(r, "uniform u'", du);
  note(r, "discrete u", ud);
  note(r, "discrete u'", dd);
  return r;
}

namespace {

Orders quadrature_orders(const std::vector<RationalPoly>& w, const std::vector<Rational>& c, bool discrete,
                         const std::string& label) {
  Orders out;
  for (int j = 1; j <= 5; ++j) {
    const RationalPoly q = weighted_defect(w, c, j - 1, j, Rational(j));
    const bool ok = discrete ? q(Rational(1)) == 0 : q.is_zero();
    if (!ok) {
      out.failure = label + "Q_" + std::to_string(j) + " = " + (discrete ? to_string(q(Rational(1))) : q.to_string());
      return out;
    }
    out.order = j;
  }
  return out;
}

}  // namespace

OrderReport verify_fcrk_quadrature(const FcrkTableau& t) {
  OrderReport r;
  r.necessary_only = true;
  const Orders uni = quadrature_orders(t.b, t.c, false, "");
  const Orders dis = quadrature_orders(t.b, t.c, true, "");
  r.uniform_u = uni.order;
  r.discrete_u = dis.order;
  note(r, "uniform quadrature", uni);
  note(r, "discrete quadrature", dis);
  if (t.reuse && !t.A.empty()) {
    const auto& row = t.A.back();
    const Orders ru = quadrature_orders(row, t.c, false, "reuse row ");
    const Orders rd = quadrature_orders(row, t.c, true, "reuse row ");
    r.reuse_row_uniform = ru.order;
    r.reuse_row_discrete = rd.order;
    note(r, "reuse row uniform quadrature", ru);
    note(r, "reuse row discrete quadrature", rd);
  }
  return r;
}

OrderReport verify_order(const Tableau& t) {
  if (const auto* f = std::get_if<FcrkTableau>(&t)) return verify_fcrk_quadrature(*f);
  return verify_fcrkn_order(std::get<FcrknTableau>(t));
}

bool OrderReport::certifies(int p) const {
  if (necessary_only) {
    if (uniform_u < p) return false;
    if (reuse_row_uniform && (*reuse_row_uniform < p - 1 || *reuse_row_discrete < p)) return false;
    return true;
  }
  return uniform_u >= p && uniform_du.value_or(0) >= p;
}

std::string OrderReport::to_string() const {
  std::ostringstream os;
  if (necessary_only) {
    os << "uniform quadrature order " << uniform_u << "\n";
    os << "discrete quadrature order " << discrete_u << "\n";
    if (reuse_row_uniform)
      os << "reuse row: uniform quadrature order " << *reuse_row_uniform << ", discrete quadrature order "
         << *reuse_row_discrete << "\n";
    os << "(quadrature conditions are necessary conditions only)\n";
  } else {
    os << "uniform order " << std::min(uniform_u, uniform_du.value_or(0)) << " (u: " << uniform_u
       << ", u': " << uniform_du.value_or(0) << ")\n";
    os << "discrete order " << std::min(discrete_u, discrete_du.value_or(0)) << " (u: " << discrete_u
       << ", u': " << discrete_du.value_or(0) << ")\n";
  }
  if (!failures.empty()) {
    os << "first failing conditions (checked through order " << max_checked << "):\n";
    for (const auto& f : failures) os << "  " << f << "\n";
  }
  return os.str();
}

}  // namespace fcrk
