#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgmorse/group.hpp"
#include "dgmorse/scalar.hpp"

namespace dgm {

struct Generator {
  std::string name;
  int degree = 0;
};

struct GradedBasis {
  std::vector<Generator> gens;
  int dmin = 0, dmax = 0;

  std::size_t size() const { return gens.size(); }
  int degree(int i) const { return gens[i].degree; }
  const std::string& name(int i) const { return gens[i].name; }
  std::optional<int> find(const std::string& n) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].name == n) return static_cast<int>(i);
    return std::nullopt;
  }
  int index(const std::string& n) const {
    auto i = find(n);
    if (!i) fail(ErrorCode::UnresolvedName, "generator " + n);
    return *i;
  }
  std::vector<int> in_degree(int d) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].degree == d) out.push_back(static_cast<int>(i));
    return out;
  }
  bool has_degree(int d) const {
    for (const auto& g : gens)
      if (g.degree == d) return true;
    return false;
  }
};

/// Laurent-variable exponents times one basis generator.
struct Monomial {
  std::vector<long> exps;
  int gen = 0;
  auto operator<=>(const Monomial&) const = default;
};

/// Finite formal sum of monomials with nonzero scalar coefficients. Used both
/// for algebra elements and for module elements.
struct LinComb {
  std::map<Monomial, Scalar> terms;

  static LinComb of(Monomial m, const Scalar& c) {
    LinComb r;
    r.add(std::move(m), c);
    return r;
  }
  bool is_zero() const { return terms.empty(); }
  void add(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
  void add(const LinComb& o, const Scalar& c = Scalar(1)) {
    for (const auto& [m, x] : o.terms) add(m, x * c);
  }
  LinComb plus(const LinComb& o) const {
    LinComb r = *this;
    r.add(o);
    return r;
  }
  LinComb minus(const LinComb& o) const {
    LinComb r = *this;
    r.add(o, Scalar(-1));
    return r;
  }
  LinComb scaled(const Scalar& c) const {
    LinComb r;
    r.add(*this, c);
    return r;
  }
  LinComb shifted(const std::vector<long>& e) const {
    LinComb r;
    for (const auto& [m, c] : terms) {
      Monomial n = m;
      for (std::size_t i = 0; i < e.size(); ++i) n.exps[i] += e[i];
      r.add(n, c);
    }
    return r;
  }
  bool operator==(const LinComb& o) const { return minus(o).is_zero(); }
};

using AlgebraElement = LinComb;
using ModuleElement = LinComb;

inline Scalar koszul_sign(long p, long q) { return ((p * q) % 2 == 0) ? Scalar(1) : Scalar(-1); }
inline Scalar parity_sign(long p) { return (p % 2 == 0) ? Scalar(1) : Scalar(-1); }

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  void add(std::string s) { issues.push_back(std::move(s)); }
  void merge(const ValidationReport& o, const std::string& prefix = "") {
    for (const auto& s : o.issues) issues.push_back(prefix + s);
  }
};

/// Presented DGA in a degree window [0, dmax]. Laurent variables are central,
/// of degree 0 and invertible; they never appear in the basis.
struct DGA {
  enum class GroupKind { None, Finite, Laurent };

  ScalarContext ground = ScalarContext::integers();
  GradedBasis basis;
  int unit = 0;
  std::vector<std::string> vars;
  std::map<std::pair<int, int>, AlgebraElement> mul_table;
  std::map<int, AlgebraElement> diff_table;
  std::optional<std::map<int, AlgebraElement>> involution;

  GroupKind group_kind = GroupKind::None;
  std::vector<int> group_gens;  // finite case; group_gens[0] is the unit
  // projection to H_0 for degree-0 generators outside the group (nullopt: maps to 0)
  std::map<int, std::optional<Group::Elem>> h0_image;

  std::size_t nvars() const { return vars.size(); }
  Monomial mono(int gen) const { return {std::vector<long>(vars.size(), 0), gen}; }
  AlgebraElement gen(int g, const Scalar& c = Scalar(1)) const { return LinComb::of(mono(g), c); }
  AlgebraElement one() const { return gen(unit); }
  AlgebraElement var_power(std::size_t v, long e) const {
    Monomial m = mono(unit);
    m.exps[v] = e;
    return LinComb::of(m, Scalar(1));
  }

  /// Degree of a homogeneous element (nullopt for zero); throws on inhomogeneous input.
  std::optional<int> degree(const AlgebraElement& a) const {
    std::optional<int> d;
    for (const auto& [m, c] : a.terms) {
      int dm = basis.degree(m.gen);
      if (d && *d != dm) fail(ErrorCode::SchemaViolation, "inhomogeneous algebra element " + to_string(a));
      d = dm;
    }
    return d;
  }

  AlgebraElement mul_gens(int a, int b) const {
    if (a == unit) return gen(b);
    if (b == unit) return gen(a);
    int d = basis.degree(a) + basis.degree(b);
    if (d > basis.dmax)
      fail(ErrorCode::WindowOverflow, "product " + basis.name(a) + "*" + basis.name(b) + " has degree " +
                                          std::to_string(d) + " > " + std::to_string(basis.dmax));
    auto it = mul_table.find({a, b});
    if (it != mul_table.end()) return it->second;
    if (!basis.has_degree(d)) return {};
    fail(ErrorCode::MissingTableEntry, "mul(" + basis.name(a) + ", " + basis.name(b) + ")");
  }

  AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y) const {
    AlgebraElement r;
    for (const auto& [m1, c1] : x.terms)
      for (const auto& [m2, c2] : y.terms) {
        std::vector<long> e = m1.exps;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += m2.exps[i];
        r.add(mul_gens(m1.gen, m2.gen).shifted(e), c1 * c2);
      }
    return r;
  }

  AlgebraElement d_gen(int g) const {
    auto it = diff_table.find(g);
    return it == diff_table.end() ? AlgebraElement{} : it->second;
  }
  AlgebraElement d(const AlgebraElement& x) const {
    AlgebraElement r;
    for (const auto& [m, c] : x.terms) r.add(d_gen(m.gen).shifted(m.exps), c);
    return r;
  }

  AlgebraElement inv(const AlgebraElement& x) const {
    if (!involution) fail(ErrorCode::NoInvolution, "algebra declares no involution");
    AlgebraElement r;
    for (const auto& [m, c] : x.terms) {
      std::vector<long> e = m.exps;
      for (auto& v : e) v = -v;
      AlgebraElement img;
      if (m.gen == unit)
        img = one();
      else {
        auto it = involution->find(m.gen);
        if (it == involution->end()) fail(ErrorCode::MissingTableEntry, "involution(" + basis.name(m.gen) + ")");
        img = it->second;
      }
      r.add(img.shifted(e), c);
    }
    return r;
  }

  // -- group data ----------------------------------------------------------

  Group group() const {
    if (group_kind == GroupKind::Laurent) return Group::free_abelian(vars);
    if (group_kind == GroupKind::None) fail(ErrorCode::NoGroupDeclaration, "algebra declares no group");
    Group g;
    for (int x : group_gens) g.names.push_back(basis.name(x));
    const std::size_t n = group_gens.size();
    g.table.assign(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        AlgebraElement p = mul_gens(group_gens[i], group_gens[j]);
        int found = -1;
        if (p.terms.size() == 1 && p.terms.begin()->second == Scalar(1))
          for (std::size_t k = 0; k < n; ++k)
            if (group_gens[k] == p.terms.begin()->first.gen) found = static_cast<int>(k);
        if (found < 0)
          fail(ErrorCode::SchemaViolation, "group elements " + g.names[i] + "*" + g.names[j] + " do not multiply to a group element");
        g.table[i][j] = found;
      }
    g.validate();
    return g;
  }

  /// Image in H_0(R) = A[G] of a degree-0 monomial, or nullopt when it projects to 0.
  std::optional<Group::Elem> h0_of(const Monomial& m) const {
    if (group_kind == GroupKind::None) fail(ErrorCode::NoGroupDeclaration, "algebra declares no group");
    Group::Elem base;
    if (group_kind == GroupKind::Finite) {
      for (std::size_t k = 0; k < group_gens.size(); ++k)
        if (group_gens[k] == m.gen) base = {static_cast<long>(k)};
    } else if (m.gen == unit) {
      base = Group::Elem(vars.size(), 0);
    }
    if (base.empty()) {
      auto it = h0_image.find(m.gen);
      if (it == h0_image.end()) fail(ErrorCode::MissingTableEntry, "h0 image of " + basis.name(m.gen));
      if (!it->second) return std::nullopt;
      base = *it->second;
    }
    if (group_kind == GroupKind::Laurent)
      for (std::size_t i = 0; i < vars.size(); ++i) base[i] += m.exps[i];
    return base;
  }

  GroupRingElement project(const AlgebraElement& a) const {
    GroupRingElement r;
    for (const auto& [m, c] : a.terms) {
      if (basis.degree(m.gen) != 0) continue;
      auto e = h0_of(m);
      if (e) r.add(*e, c);
    }
    return r;
  }

  /// The algebra element representing a group element (a group-like class).
  AlgebraElement from_group(const Group::Elem& e) const {
    if (group_kind == GroupKind::Finite) return gen(group_gens[e[0]]);
    Monomial m = mono(unit);
    m.exps = e;
    return LinComb::of(m, Scalar(1));
  }

  // -- rendering -------------------------------------------------------------

  std::string mono_string(const Monomial& m) const {
    std::string out;
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
      if (m.exps[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += vars[i];
      if (m.exps[i] != 1) out += "^" + std::to_string(m.exps[i]);
    }
    if (m.gen != unit) {
      if (!out.empty()) out += "*";
      out += basis.name(m.gen);
    }
    return out;
  }

  std::string to_string(const AlgebraElement& a) const { return render(a, [&](const Monomial& m) { return mono_string(m); }); }

  template <class F>
  static std::string render(const LinComb& a, F mono_name) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : a.terms) {
      std::string cs = c.to_string();
      bool neg = cs[0] == '-';
      if (neg) cs = cs.substr(1);
      out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
      first = false;
      std::string nm = mono_name(m);
      if (nm.empty())
        out += cs;
      else if (cs == "1")
        out += nm;
      else
        out += cs + "*" + nm;
    }
    return out;
  }
};

/// Checks every DGA axiom on basis data; throws MissingTableEntry when a
/// required product is undeclared.
inline ValidationReport validate_dga(const DGA& R) {
  ValidationReport rep;
  const auto& B = R.basis;
  const int n = static_cast<int>(B.size());
  if (B.dmin != 0) rep.add("window must start at degree 0");
  for (int g = 0; g < n; ++g)
    if (B.degree(g) < B.dmin || B.degree(g) > B.dmax) rep.add("generator " + B.name(g) + " outside the window");
  if (B.degree(R.unit) != 0) rep.add("unit " + B.name(R.unit) + " is not in degree 0");

  auto deg_ok = [&](const AlgebraElement& a, int expected, const std::string& what) {
    auto d = R.degree(a);
    if (d && *d != expected)
      rep.add(what + " has degree " + std::to_string(*d) + ", expected " + std::to_string(expected));
  };
  for (const auto& [k, v] : R.mul_table) {
    deg_ok(v, B.degree(k.first) + B.degree(k.second), "mul(" + B.name(k.first) + ", " + B.name(k.second) + ")");
    if (k.first == R.unit && !(v == R.gen(k.second))) rep.add("unit axiom fails on unit*" + B.name(k.second));
    if (k.second == R.unit && !(v == R.gen(k.first))) rep.add("unit axiom fails on " + B.name(k.first) + "*unit");
  }
  for (const auto& [g, v] : R.diff_table) {
    if (v.is_zero()) continue;
    if (B.degree(g) - 1 < B.dmin) {
      rep.add("differential of " + B.name(g) + " = " + R.to_string(v) + " leaves the window (degree " +
              std::to_string(B.degree(g) - 1) + ")");
      continue;
    }
    deg_ok(v, B.degree(g) - 1, "d(" + B.name(g) + ")");
  }
  if (!rep.ok()) return rep;

  // totality: force evaluation of every in-window product
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (B.degree(a) + B.degree(b) <= B.dmax) (void)R.mul_gens(a, b);

  for (int g = 0; g < n; ++g)
    if (!R.d(R.d_gen(g)).is_zero()) rep.add("d∘d != 0 on " + B.name(g));

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (B.degree(a) + B.degree(b) > B.dmax) continue;
      AlgebraElement ab = R.mul_gens(a, b);
      for (int c = 0; c < n; ++c) {
        if (B.degree(a) + B.degree(b) + B.degree(c) > B.dmax) continue;
        if (!(R.mul(ab, R.gen(c)) == R.mul(R.gen(a), R.mul_gens(b, c))))
          rep.add("associativity fails on (" + B.name(a) + ", " + B.name(b) + ", " + B.name(c) + ")");
      }
      AlgebraElement lhs = R.d(ab);
      AlgebraElement rhs = R.mul(R.d_gen(a), R.gen(b)).plus(R.mul(R.gen(a), R.d_gen(b)).scaled(parity_sign(B.degree(a))));
      if (!(lhs == rhs)) rep.add("Leibniz fails on (" + B.name(a) + ", " + B.name(b) + ")");
    }

  if (R.group_kind == DGA::GroupKind::Finite) {
    try {
      if (R.group_gens.empty() || R.group_gens[0] != R.unit) rep.add("first group element must be the unit");
      for (int g : R.group_gens)
        if (B.degree(g) != 0) rep.add("group element " + B.name(g) + " is not in degree 0");
      (void)R.group();
    } catch (const Error& e) {
      rep.add(e.what());
    }
  }
  if (R.group_kind == DGA::GroupKind::Laurent && R.vars.empty()) rep.add("Laurent group declared without variables");
  if (R.group_kind != DGA::GroupKind::None) {
    // the projection to H_0 must be multiplicative on degree-0 generators
    Group G = R.group();
    auto zero_gens = B.in_degree(0);
    for (int a : zero_gens)
      for (int b : zero_gens) {
        GroupRingElement lhs = R.project(R.mul_gens(a, b));
        GroupRingElement rhs = R.project(R.gen(a)).times(R.project(R.gen(b)), G);
        if (!(lhs == rhs)) rep.add("projection to H0 not multiplicative on (" + B.name(a) + ", " + B.name(b) + ")");
      }
    for (int g : B.in_degree(1)) {
      if (!R.project(R.d_gen(g)).is_zero()) rep.add("boundary d(" + B.name(g) + ") does not project to 0 in H0");
    }
  }

  if (R.involution) {
    for (int a = 0; a < n; ++a) {
      AlgebraElement ia = R.inv(R.gen(a));
      auto d = R.degree(ia);
      if (d && *d != B.degree(a)) rep.add("involution does not preserve the degree of " + B.name(a));
      if (!(R.inv(ia) == R.gen(a))) rep.add("involution is not involutive on " + B.name(a));
      if (!(R.d(ia) == R.inv(R.d_gen(a)))) rep.add("involution does not commute with d on " + B.name(a));
      for (int b = 0; b < n; ++b) {
        if (B.degree(a) + B.degree(b) > B.dmax) continue;
        AlgebraElement lhs = R.inv(R.mul_gens(a, b));
        AlgebraElement rhs = R.mul(R.inv(R.gen(b)), ia).scaled(koszul_sign(B.degree(a), B.degree(b)));
        if (!(lhs == rhs)) rep.add("involution is not an anti-homomorphism on (" + B.name(a) + ", " + B.name(b) + ")");
      }
    }
  }
  return rep;
}

/// Degree-preserving map of presented DGAs given on generators and variables.
struct DGAMorphism {
  const DGA* source = nullptr;
  const DGA* target = nullptr;
  std::map<int, AlgebraElement> gen_image;               // source gen -> target element
  std::vector<AlgebraElement> var_image, var_inv_image;  // images of t_i and t_i^-1

  AlgebraElement var_pow(std::size_t v, long e) const {
    AlgebraElement r = target->one();
    const AlgebraElement& base = e >= 0 ? var_image[v] : var_inv_image[v];
    for (long k = 0; k < (e >= 0 ? e : -e); ++k) r = target->mul(r, base);
    return r;
  }
  AlgebraElement apply(const AlgebraElement& a) const {
    AlgebraElement r;
    for (const auto& [m, c] : a.terms) {
      AlgebraElement img = target->one();
      for (std::size_t v = 0; v < m.exps.size(); ++v)
        if (m.exps[v]) img = target->mul(img, var_pow(v, m.exps[v]));
      AlgebraElement g;
      if (m.gen == source->unit)
        g = target->one();
      else {
        auto it = gen_image.find(m.gen);
        if (it == gen_image.end()) fail(ErrorCode::MissingTableEntry, "morphism image of " + source->basis.name(m.gen));
        g = it->second;
      }
      r.add(target->mul(img, g), c);
    }
    return r;
  }

  ValidationReport validate() const {
    ValidationReport rep;
    const auto& B = source->basis;
    for (int a = 0; a < static_cast<int>(B.size()); ++a) {
      AlgebraElement fa = apply(source->gen(a));
      auto d = target->degree(fa);
      if (d && *d != B.degree(a)) rep.add("morphism changes the degree of " + B.name(a));
      if (!(target->d(fa) == apply(source->d_gen(a)))) rep.add("morphism does not commute with d on " + B.name(a));
      for (int b = 0; b < static_cast<int>(B.size()); ++b) {
        if (B.degree(a) + B.degree(b) > B.dmax) continue;
        if (!(apply(source->mul_gens(a, b)) == target->mul(fa, apply(source->gen(b)))))
          rep.add("morphism not multiplicative on (" + B.name(a) + ", " + B.name(b) + ")");
      }
    }
    if (!(apply(source->one()) == target->one())) rep.add("morphism does not preserve the unit");
    for (std::size_t v = 0; v < source->nvars(); ++v)
      if (!(target->mul(var_image[v], var_inv_image[v]) == target->one()))
        rep.add("image of " + source->vars[v] + " is not inverted by the image of its inverse");
    return rep;
  }
};

}  // namespace dgm
