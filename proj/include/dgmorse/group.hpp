#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgmorse/scalar.hpp"

namespace dgm {

/// Finite group (explicit Cayley table, element 0 is the identity) or free
/// abelian group Z^r written with Laurent variables.
struct Group {
  enum class Kind { Finite, FreeAbelian };
  using Elem = std::vector<long>;  // finite: {index}; free abelian: exponent vector

  Kind kind = Kind::Finite;
  std::vector<std::string> names;          // element names (finite) or variable names
  std::vector<std::vector<int>> table;     // table[a][b] = index of a*b

  static Group trivial() {
    Group g;
    g.names = {"1"};
    g.table = {{0}};
    return g;
  }
  static Group free_abelian(std::vector<std::string> vars) {
    Group g;
    g.kind = Kind::FreeAbelian;
    g.names = std::move(vars);
    return g;
  }

  std::size_t rank() const { return kind == Kind::FreeAbelian ? names.size() : 0; }
  std::size_t order() const { return kind == Kind::Finite ? names.size() : 0; }

  Elem identity() const { return kind == Kind::Finite ? Elem{0} : Elem(names.size(), 0); }
  Elem mul(const Elem& a, const Elem& b) const {
    if (kind == Kind::Finite) return {table[a[0]][b[0]]};
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
  }
  Elem inverse(const Elem& a) const {
    if (kind == Kind::Finite) {
      for (std::size_t b = 0; b < names.size(); ++b)
        if (table[a[0]][b] == 0) return {static_cast<long>(b)};
      fail(ErrorCode::SchemaViolation, "group element " + names[a[0]] + " has no inverse");
    }
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
  }
  bool is_abelian() const {
    if (kind == Kind::FreeAbelian) return true;
    for (std::size_t a = 0; a < names.size(); ++a)
      for (std::size_t b = 0; b < names.size(); ++b)
        if (table[a][b] != table[b][a]) return false;
    return true;
  }
  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < order(); ++i) out.push_back({static_cast<long>(i)});
    return out;
  }

  std::string name(const Elem& e) const {
    if (kind == Kind::Finite) return names[e[0]];
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += names[i];
      if (e[i] != 1) out += "^" + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
  }

  /// Ring name used in refusal messages, e.g. "ℤ[ℤ²]".
  std::string ring_name(const std::string& ground = "ℤ") const {
    if (kind == Kind::Finite) return ground + "[G]";
    static const char* sup[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string r = std::to_string(rank()), s;
    for (char c : r) s += sup[c - '0'];
    return ground + "[ℤ" + (rank() == 1 ? std::string() : s) + "]";
  }

  /// Validates a finite Cayley table: identity, closure, inverses, associativity.
  void validate() const {
    if (kind != Kind::Finite) return;
    const std::size_t n = names.size();
    if (n == 0 || table.size() != n) fail(ErrorCode::SchemaViolation, "group table has wrong size");
    for (std::size_t a = 0; a < n; ++a) {
      if (table[a].size() != n) fail(ErrorCode::SchemaViolation, "group table row " + names[a]);
      if (table[0][a] != static_cast<int>(a) || table[a][0] != static_cast<int>(a))
        fail(ErrorCode::SchemaViolation, "first group element is not the identity on " + names[a]);
      inverse({static_cast<long>(a)});
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table[table[a][b]][c] != table[a][table[b][c]])
            fail(ErrorCode::SchemaViolation, "group table not associative at (" + names[a] + "," + names[b] + "," + names[c] + ")");
  }
};

/// Element of the group ring A[G]; coefficients are scalars of the ground ring.
struct GroupRingElement {
  std::map<Group::Elem, Scalar> terms;

  static GroupRingElement unit(const Group& g, const Scalar& one) {
    GroupRingElement r;
    r.terms[g.identity()] = one;
    return r;
  }
  static GroupRingElement of(const Group::Elem& e, const Scalar& c) {
    GroupRingElement r;
    if (!c.is_zero()) r.terms[e] = c;
    return r;
  }

  bool is_zero() const { return terms.empty(); }

  void add(const Group::Elem& e, const Scalar& c) {
    auto it = terms.find(e);
    if (it == terms.end()) {
      if (!c.is_zero()) terms.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }

  GroupRingElement plus(const GroupRingElement& o) const {
    GroupRingElement r = *this;
    for (const auto& [e, c] : o.terms) r.add(e, c);
    return r;
  }
  GroupRingElement negated() const {
    GroupRingElement r;
    for (const auto& [e, c] : terms) r.terms[e] = -c;
    return r;
  }
  GroupRingElement times(const GroupRingElement& o, const Group& g) const {
    GroupRingElement r;
    for (const auto& [e1, c1] : terms)
      for (const auto& [e2, c2] : o.terms) r.add(g.mul(e1, e2), c1 * c2);
    return r;
  }
  Scalar augmentation() const {
    Scalar s(0);
    for (const auto& [e, c] : terms) s += c;
    return s;
  }
  bool operator==(const GroupRingElement& o) const { return plus(o.negated()).is_zero(); }

  /// A unit of A[G] for the cases we can certify: a single group element with
  /// a unit coefficient.
  bool is_trivial_unit() const { return terms.size() == 1 && is_unit(terms.begin()->second); }

  std::string to_string(const Group& g) const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms) {
      std::string cs = c.to_string();
      bool neg = cs[0] == '-';
      if (neg) cs = cs.substr(1);
      out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
      first = false;
      std::string nm = g.name(e);
      if (nm == "1")
        out += cs;
      else if (cs == "1")
        out += nm;
      else
        out += cs + "*" + nm;
    }
    return out;
  }
};

}  // namespace dgm
