#pragma once

#include <map>
#include <string>
#include <utility>

#include "dgmorse/algebra.hpp"

namespace dgm {

enum class Sense { Homological, Cohomological };

/// DG right module over a presented DGA. Two shapes:
///  - finite rank: Laurent variables act through declared entries
///    (actor names "t" and "t^-1");
///  - Laurent free: the module is free over k[t^±], variables multiply
///    coefficients, and elements carry exponent vectors.
struct DGModule {
  std::string name;
  GradedBasis basis;
  Sense sense = Sense::Homological;
  bool laurent_free = false;
  std::map<std::pair<int, std::string>, ModuleElement> action;
  std::map<int, ModuleElement> diff;

  /// Degree of alpha*a given |alpha| and the homological degree of a.
  int act_degree(int mod_deg, int alg_deg) const { return sense == Sense::Homological ? mod_deg + alg_deg : mod_deg - alg_deg; }
  int diff_degree(int mod_deg) const { return sense == Sense::Homological ? mod_deg - 1 : mod_deg + 1; }

  Monomial mono(const DGA& R, int g) const { return {std::vector<long>(R.nvars(), 0), g}; }
  ModuleElement gen(const DGA& R, int g, const Scalar& c = Scalar(1)) const { return LinComb::of(mono(R, g), c); }

  std::optional<int> degree(const ModuleElement& x) const {
    std::optional<int> d;
    for (const auto& [m, c] : x.terms) {
      int dm = basis.degree(m.gen);
      if (d && *d != dm) fail(ErrorCode::SchemaViolation, "inhomogeneous element in module " + name);
      d = dm;
    }
    return d;
  }

  std::string to_string(const DGA& R, const ModuleElement& x) const {
    return DGA::render(x, [&](const Monomial& m) {
      std::string out;
      for (std::size_t i = 0; i < m.exps.size(); ++i) {
        if (m.exps[i] == 0) continue;
        out += R.vars[i];
        if (m.exps[i] != 1) out += "^" + std::to_string(m.exps[i]);
        out += "*";
      }
      return out + basis.name(m.gen);
    });
  }

  const ModuleElement& entry(int g, const std::string& actor, int target_deg, ModuleElement& zero) const {
    auto it = action.find({g, actor});
    if (it != action.end()) return it->second;
    if (!basis.has_degree(target_deg)) return zero;
    fail(ErrorCode::MissingTableEntry, "act(" + basis.name(g) + ", " + actor + ") in module " + name);
  }

  /// beta * g for a module generator beta and algebra generator g.
  ModuleElement act_gen(const DGA& R, int beta, int g) const {
    if (g == R.unit) return gen(R, beta);
    ModuleElement zero;
    return entry(beta, R.basis.name(g), act_degree(basis.degree(beta), R.basis.degree(g)), zero);
  }

  ModuleElement act_var(const DGA& R, const ModuleElement& x, std::size_t v, long e) const {
    if (e == 0) return x;
    if (laurent_free) {
      std::vector<long> s(R.nvars(), 0);
      s[v] = e;
      return x.shifted(s);
    }
    std::string actor = e > 0 ? R.vars[v] : R.vars[v] + "^-1";
    ModuleElement cur = x;
    for (long k = 0; k < (e > 0 ? e : -e); ++k) {
      ModuleElement next;
      for (const auto& [m, c] : cur.terms) {
        ModuleElement zero;
        next.add(entry(m.gen, actor, basis.degree(m.gen), zero), c);
      }
      cur = std::move(next);
    }
    return cur;
  }

  ModuleElement act(const DGA& R, const ModuleElement& x, const AlgebraElement& a) const {
    ModuleElement r;
    for (const auto& [mm, c1] : x.terms)
      for (const auto& [am, c2] : a.terms) {
        ModuleElement cur = LinComb::of(mm, Scalar(1));
        for (std::size_t v = 0; v < am.exps.size(); ++v) cur = act_var(R, cur, v, am.exps[v]);
        ModuleElement out;
        for (const auto& [m, c] : cur.terms) out.add(act_gen(R, m.gen, am.gen).shifted(m.exps), c);
        r.add(out, c1 * c2);
      }
    return r;
  }

  ModuleElement d_gen(int g) const {
    auto it = diff.find(g);
    return it == diff.end() ? ModuleElement{} : it->second;
  }
  ModuleElement d(const ModuleElement& x) const {
    ModuleElement r;
    for (const auto& [m, c] : x.terms) r.add(d_gen(m.gen).shifted(m.exps), c);
    return r;
  }
};

inline ValidationReport validate_module(const DGModule& F, const DGA& R) {
  ValidationReport rep;
  const auto& B = F.basis;
  const int n = static_cast<int>(B.size());
  const auto& AB = R.basis;
  const int na = static_cast<int>(AB.size());

  for (const auto& [k, v] : F.action) {
    auto d = F.degree(v);
    auto ai = AB.find(k.second);
    int adeg = ai ? AB.degree(*ai) : 0;
    if (d && *d != F.act_degree(B.degree(k.first), adeg))
      rep.add("act(" + B.name(k.first) + ", " + k.second + ") has the wrong degree");
    if (ai && *ai == R.unit && !(v == F.gen(R, k.first))) rep.add("unit does not act as the identity on " + B.name(k.first));
  }
  for (const auto& [g, v] : F.diff) {
    auto d = F.degree(v);
    if (d && *d != F.diff_degree(B.degree(g))) rep.add("d(" + B.name(g) + ") has the wrong degree");
  }
  if (!rep.ok()) return rep;

  for (int g = 0; g < n; ++g)
    if (!F.d(F.d_gen(g)).is_zero()) rep.add("d∘d != 0 on " + B.name(g));

  for (int b = 0; b < n; ++b) {
    ModuleElement beta = F.gen(R, b);
    for (int a = 0; a < na; ++a) {
      ModuleElement ba = F.act(R, beta, R.gen(a));
      // Leibniz for the action
      ModuleElement lhs = F.d(ba);
      ModuleElement rhs = F.act(R, F.d(beta), R.gen(a)).plus(F.act(R, beta, R.d_gen(a)).scaled(parity_sign(B.degree(b))));
      if (!(lhs == rhs)) rep.add("action is not a chain map on (" + B.name(b) + ", " + AB.name(a) + ")");
      for (int c = 0; c < na; ++c) {
        if (AB.degree(a) + AB.degree(c) > AB.dmax) continue;
        ModuleElement l = F.act(R, ba, R.gen(c));
        ModuleElement r = F.act(R, beta, R.mul_gens(a, c));
        if (!(l == r)) rep.add("action not associative on (" + B.name(b) + ", " + AB.name(a) + ", " + AB.name(c) + ")");
      }
      // central variables commute with generators
      for (std::size_t v = 0; v < R.nvars(); ++v) {
        ModuleElement l = F.act(R, F.act(R, beta, R.var_power(v, 1)), R.gen(a));
        ModuleElement r = F.act(R, ba, R.var_power(v, 1));
        if (!(l == r)) rep.add("variable " + R.vars[v] + " does not commute with " + AB.name(a) + " on " + B.name(b));
      }
    }
    for (std::size_t v = 0; v < R.nvars(); ++v) {
      ModuleElement round = F.act(R, F.act(R, beta, R.var_power(v, 1)), R.var_power(v, -1));
      ModuleElement round2 = F.act(R, F.act(R, beta, R.var_power(v, -1)), R.var_power(v, 1));
      if (!(round == beta) || !(round2 == beta)) rep.add("variable " + R.vars[v] + " does not act invertibly on " + B.name(b));
      ModuleElement dl = F.d(F.act(R, beta, R.var_power(v, 1)));
      ModuleElement dr = F.act(R, F.d(beta), R.var_power(v, 1));
      if (!(dl == dr)) rep.add("variable " + R.vars[v] + " does not commute with d on " + B.name(b));
    }
  }
  return rep;
}

/// R acting on itself by right multiplication, with products leaving the
/// window set to zero. With Laurent variables the module is Laurent free.
inline DGModule regular_module(const DGA& R, const std::string& name = "regular") {
  DGModule F;
  F.name = name;
  F.basis = R.basis;
  F.laurent_free = R.nvars() > 0;
  const int n = static_cast<int>(R.basis.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (b == R.unit) continue;
      if (R.basis.degree(a) + R.basis.degree(b) > R.basis.dmax) continue;
      F.action[{a, R.basis.name(b)}] = R.mul_gens(a, b);
    }
    auto d = R.d_gen(a);
    if (!d.is_zero()) F.diff[a] = d;
  }
  return F;
}

/// F-bar: degrees negated and the grading sense flipped; content unchanged.
inline DGModule opposite_grading(const DGModule& F) {
  DGModule G = F;
  for (auto& g : G.basis.gens) g.degree = -g.degree;
  std::swap(G.basis.dmin, G.basis.dmax);
  G.basis.dmin = -G.basis.dmin;
  G.basis.dmax = -G.basis.dmax;
  G.sense = F.sense == Sense::Homological ? Sense::Cohomological : Sense::Homological;
  return G;
}

}  // namespace dgm
