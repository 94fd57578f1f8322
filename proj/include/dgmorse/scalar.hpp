#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dgmorse/error.hpp"

namespace dgm {

using Integer = mpz_class;
using Rational = mpq_class;

/// Element of the prime field F_p. The prime travels with the value so that
/// no global modulus is needed.
struct Modp {
  std::uint64_t v = 0;
  std::uint64_t p = 0;

  Modp() = default;
  Modp(std::int64_t value, std::uint64_t prime) : p(prime) {
    auto m = static_cast<std::int64_t>(prime);
    auto r = value % m;
    v = static_cast<std::uint64_t>(r < 0 ? r + m : r);
  }
  static Modp from_integer(const Integer& z, std::uint64_t prime) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), prime);
    Modp out;
    out.p = prime;
    out.v = r.get_ui();
    return out;
  }
};

inline void check_same_prime(const Modp& a, const Modp& b) {
  if (a.p != b.p) fail(ErrorCode::ContextMismatch, "prime fields F_" + std::to_string(a.p) + " and F_" + std::to_string(b.p));
}
inline Modp operator+(const Modp& a, const Modp& b) {
  check_same_prime(a, b);
  Modp r;
  r.p = a.p;
  r.v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a.v) + b.v) % a.p);
  return r;
}
inline Modp operator-(const Modp& a) {
  Modp r;
  r.p = a.p;
  r.v = a.v == 0 ? 0 : a.p - a.v;
  return r;
}
inline Modp operator-(const Modp& a, const Modp& b) { return a + (-b); }
inline Modp operator*(const Modp& a, const Modp& b) {
  check_same_prime(a, b);
  Modp r;
  r.p = a.p;
  r.v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a.v) * b.v) % a.p);
  return r;
}
inline bool operator==(const Modp& a, const Modp& b) { return a.p == b.p && a.v == b.v; }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const Modp& a) { return a.v == 0; }

inline Rational field_inverse(const Rational& q) {
  if (is_zero(q)) fail(ErrorCode::UnsupportedRing, "division by zero in Q");
  return Rational(1) / q;
}
inline Modp field_inverse(const Modp& a) {
  if (a.v == 0) fail(ErrorCode::UnsupportedRing, "division by zero in F_" + std::to_string(a.p));
  // Fermat: a^(p-2)
  Modp result(1, a.p), base = a;
  std::uint64_t e = a.p - 2;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

inline std::string to_string(const Integer& z) { return z.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Modp& a) { return std::to_string(a.v); }

inline bool is_probable_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Univariate Laurent polynomial over a field K (Rational or Modp), kept
/// normalized: no zero coefficients, exponents strictly increasing.
/// `one_` is the unit of K, so constants can be created without a context.
template <class K>
class Laurent {
 public:
  using Term = std::pair<long, K>;

  Laurent() = default;
  explicit Laurent(K one) : one_(std::move(one)) {}
  Laurent(K one, std::vector<Term> terms) : one_(std::move(one)), terms_(std::move(terms)) { normalize(); }

  static Laurent monomial(const K& one, const K& c, long e) { return Laurent(one, {{e, c}}); }
  static Laurent constant(const K& one, const K& c) { return monomial(one, c, 0); }

  const std::vector<Term>& terms() const { return terms_; }
  const K& field_one() const { return one_; }
  bool is_zero() const { return terms_.empty(); }
  long low() const { return terms_.front().first; }
  long high() const { return terms_.back().first; }
  long span() const { return is_zero() ? -1 : high() - low(); }
  const K& leading() const { return terms_.back().second; }
  const K& trailing() const { return terms_.front().second; }

  Laurent shifted(long k) const {
    Laurent r(one_);
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.first += k;
    return r;
  }
  Laurent scaled(const K& c) const {
    std::vector<Term> out;
    for (const auto& [e, a] : terms_) out.emplace_back(e, a * c);
    return Laurent(one_, std::move(out));
  }

  friend Laurent operator+(const Laurent& a, const Laurent& b) {
    std::vector<Term> out;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        out.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        out.push_back(b.terms_[j++]);
      } else {
        out.emplace_back(a.terms_[i].first, a.terms_[i].second + b.terms_[j].second);
        ++i;
        ++j;
      }
    }
    return Laurent(pick_one(a, b), std::move(out));
  }
  friend Laurent operator-(const Laurent& a) {
    std::vector<Term> out;
    for (const auto& [e, c] : a.terms_) out.emplace_back(e, -c);
    return Laurent(a.one_, std::move(out));
  }
  friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    std::vector<Term> out;
    for (const auto& [e1, c1] : a.terms_)
      for (const auto& [e2, c2] : b.terms_) out.emplace_back(e1 + e2, c1 * c2);
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> merged;
    for (auto& t : out) {
      if (!merged.empty() && merged.back().first == t.first)
        merged.back().second = merged.back().second + t.second;
      else
        merged.push_back(std::move(t));
    }
    return Laurent(pick_one(a, b), std::move(merged));
  }
  friend bool operator==(const Laurent& a, const Laurent& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].first != b.terms_[i].first || !(a.terms_[i].second == b.terms_[i].second)) return false;
    return true;
  }

  /// Euclidean division: a = q*b + r with r == 0 or span(r) < span(b).
  friend std::pair<Laurent, Laurent> divmod(const Laurent& a, const Laurent& b) {
    if (b.is_zero()) fail(ErrorCode::UnsupportedRing, "Laurent division by zero");
    Laurent q(pick_one(a, b)), r = a;
    const long bspan = b.span();
    const K lead_inv = field_inverse(b.leading());
    // cancel the top term of r until its span drops below b's; the low end never moves
    while (!r.is_zero() && r.span() >= bspan) {
      long shift = r.high() - b.high();
      K c = r.leading() * lead_inv;
      Laurent m = monomial(q.one_, c, shift);
      q = q + m;
      r = r - m * b;
    }
    return {q, r};
  }

  std::string to_string(const std::string& var) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      std::string cs = dgm::to_string(c);
      bool negative = !cs.empty() && cs[0] == '-';
      if (negative) cs = cs.substr(1);
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      std::string mono;
      if (e != 0) mono = var + (e == 1 ? "" : "^" + std::to_string(e));
      if (mono.empty())
        out += cs;
      else if (cs == "1")
        out += mono;
      else
        out += cs + "*" + mono;
    }
    return out;
  }

 private:
  static const K& pick_one(const Laurent& a, const Laurent& b) { return is_unset(a.one_) ? b.one_ : a.one_; }
  static bool is_unset(const K& k) { return dgm::is_zero(k); }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first)
        merged.back().second = merged.back().second + t.second;
      else
        merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return dgm::is_zero(t.second); });
    terms_ = std::move(merged);
  }

  K one_{};
  std::vector<Term> terms_;
};

enum class ScalarKind { Z = 0, Q = 1, Fp = 2, QLaurent = 3, FpLaurent = 4 };

/// The ring a computation runs over. Laurent kinds carry the variable name
/// used for rendering.
struct ScalarContext {
  ScalarKind kind = ScalarKind::Z;
  std::uint64_t prime = 0;
  std::string var = "t";

  static ScalarContext integers() { return {}; }
  static ScalarContext rationals() { return {ScalarKind::Q, 0, "t"}; }
  static ScalarContext prime_field(std::uint64_t p) {
    if (!is_probable_prime(p)) fail(ErrorCode::UnsupportedRing, std::to_string(p) + " is not prime");
    return {ScalarKind::Fp, p, "t"};
  }
  static ScalarContext laurent_over(const ScalarContext& field, std::string var) {
    if (field.kind == ScalarKind::Q) return {ScalarKind::QLaurent, 0, std::move(var)};
    if (field.kind == ScalarKind::Fp) return {ScalarKind::FpLaurent, field.prime, std::move(var)};
    fail(ErrorCode::UnsupportedRing, "Laurent polynomials are supported over a field only, not over " + field.name());
  }

  bool is_field() const { return kind == ScalarKind::Q || kind == ScalarKind::Fp; }
  bool is_laurent() const { return kind == ScalarKind::QLaurent || kind == ScalarKind::FpLaurent; }
  bool is_euclidean() const { return true; }
  /// Coefficient field of a Laurent ring (or the ring itself otherwise).
  ScalarContext ground() const {
    if (kind == ScalarKind::QLaurent) return rationals();
    if (kind == ScalarKind::FpLaurent) return prime_field(prime);
    return *this;
  }

  std::string name() const {
    switch (kind) {
      case ScalarKind::Z: return "Z";
      case ScalarKind::Q: return "Q";
      case ScalarKind::Fp: return "F_" + std::to_string(prime);
      case ScalarKind::QLaurent: return "Q[" + var + "," + var + "^-1]";
      case ScalarKind::FpLaurent: return "F_" + std::to_string(prime) + "[" + var + "," + var + "^-1]";
    }
    return "?";
  }

  friend bool operator==(const ScalarContext& a, const ScalarContext& b) {
    return a.kind == b.kind && a.prime == b.prime && (!a.is_laurent() || a.var == b.var);
  }
};

/// Exact scalar: an integer, rational, prime-field element or Laurent
/// polynomial over Q or F_p. Integers embed into every other kind, so integer
/// literals combine with any scalar.
class Scalar {
 public:
  using Value = std::variant<Integer, Rational, Modp, Laurent<Rational>, Laurent<Modp>>;

  Scalar() : v_(Integer(0)) {}
  Scalar(long n) : v_(Integer(n)) {}  // NOLINT: integer literals are scalars
  Scalar(int n) : v_(Integer(n)) {}   // NOLINT
  Scalar(Integer z) : v_(std::move(z)) {}      // NOLINT
  Scalar(Rational q) : v_(canonical(std::move(q))) {}  // NOLINT
  Scalar(Modp a) : v_(std::move(a)) {}         // NOLINT
  Scalar(Laurent<Rational> l) : v_(std::move(l)) {}  // NOLINT
  Scalar(Laurent<Modp> l) : v_(std::move(l)) {}      // NOLINT

  const Value& value() const { return v_; }
  ScalarKind kind() const { return static_cast<ScalarKind>(v_.index()); }

  bool is_zero() const {
    return std::visit(
        [](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Integer>)
            return sgn(x) == 0;
          else if constexpr (std::is_same_v<T, Rational>)
            return sgn(x) == 0;
          else if constexpr (std::is_same_v<T, Modp>)
            return x.v == 0;
          else
            return x.is_zero();
        },
        v_);
  }

  /// Converts into the given context (integers embed anywhere; Q and F_p
  /// embed into their Laurent rings).
  Scalar in(const ScalarContext& ctx) const;

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return binary(a, b, [](const auto& x, const auto& y) { return x + y; }); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return binary(a, b, [](const auto& x, const auto& y) { return x - y; }); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return binary(a, b, [](const auto& x, const auto& y) { return x * y; }); }
  friend Scalar operator-(const Scalar& a) {
    return std::visit(
        [](const auto& x) -> Scalar {
          using T = std::decay_t<decltype(x)>;
          return Scalar(fix(T(-x)));
        },
        a.v_);
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.v_.index() == b.v_.index()) return std::visit(Equal{}, a.v_, b.v_);
    return (a - b).is_zero();
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string to_string(const std::string& var = "t") const {
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Laurent<Rational>> || std::is_same_v<T, Laurent<Modp>>)
            return x.to_string(var);
          else
            return dgm::to_string(x);
        },
        v_);
  }

  /// Prime of an F_p or F_p-Laurent scalar, 0 otherwise (or when unknown).
  std::uint64_t prime() const {
    if (auto* m = std::get_if<Modp>(&v_)) return m->p;
    if (auto* l = std::get_if<Laurent<Modp>>(&v_)) return l->field_one().p;
    return 0;
  }

 private:
  struct Equal {
    template <class A, class B>
    bool operator()(const A& a, const B& b) const {
      if constexpr (std::is_same_v<A, B>)
        return a == b;
      else
        return false;
    }
  };

  static Rational canonical(Rational q) {
    q.canonicalize();
    return q;
  }
  template <class T>
  static T fix(T x) {
    if constexpr (std::is_same_v<T, Rational>) x.canonicalize();
    return x;
  }

  template <class F>
  static Scalar binary(const Scalar& a, const Scalar& b, F f);

  static Scalar promote(const Scalar& x, const Scalar& like);

  Value v_;
};

inline Scalar Scalar::in(const ScalarContext& ctx) const {
  const auto& z = v_;
  switch (ctx.kind) {
    case ScalarKind::Z:
      if (auto* i = std::get_if<Integer>(&z)) return *i;
      break;
    case ScalarKind::Q:
      if (auto* i = std::get_if<Integer>(&z)) return Rational(*i);
      if (auto* q = std::get_if<Rational>(&z)) return *q;
      break;
    case ScalarKind::Fp:
      if (auto* i = std::get_if<Integer>(&z)) return Modp::from_integer(*i, ctx.prime);
      if (auto* m = std::get_if<Modp>(&z))
        if (m->p == ctx.prime) return *m;
      if (auto* q = std::get_if<Rational>(&z)) {
        Modp num = Modp::from_integer(q->get_num(), ctx.prime);
        Modp den = Modp::from_integer(q->get_den(), ctx.prime);
        return num * field_inverse(den);
      }
      break;
    case ScalarKind::QLaurent: {
      if (auto* l = std::get_if<Laurent<Rational>>(&z)) return *l;
      Scalar c = in(ScalarContext::rationals());
      return Laurent<Rational>::constant(Rational(1), std::get<Rational>(c.v_));
    }
    case ScalarKind::FpLaurent: {
      if (auto* l = std::get_if<Laurent<Modp>>(&z))
        if (l->field_one().p == ctx.prime) return *l;
      if (std::holds_alternative<Laurent<Modp>>(z) || std::holds_alternative<Laurent<Rational>>(z)) break;
      Scalar c = in(ScalarContext::prime_field(ctx.prime));
      return Laurent<Modp>::constant(Modp(1, ctx.prime), std::get<Modp>(c.v_));
    }
  }
  fail(ErrorCode::ContextMismatch, "cannot convert scalar " + to_string() + " into " + ctx.name());
}

inline Scalar Scalar::promote(const Scalar& x, const Scalar& like) {
  switch (like.kind()) {
    case ScalarKind::Z: return x;
    case ScalarKind::Q: return x.in(ScalarContext::rationals());
    case ScalarKind::Fp: return x.in(ScalarContext::prime_field(like.prime()));
    case ScalarKind::QLaurent: return x.in({ScalarKind::QLaurent, 0, "t"});
    case ScalarKind::FpLaurent: return x.in({ScalarKind::FpLaurent, like.prime(), "t"});
  }
  return x;
}

template <class F>
Scalar Scalar::binary(const Scalar& a, const Scalar& b, F f) {
  if (a.v_.index() != b.v_.index()) {
    // Promote the lower kind into the higher one.
    if (a.v_.index() < b.v_.index()) return binary(promote(a, b), b, f);
    return binary(a, promote(b, a), f);
  }
  return std::visit(
      [&](const auto& x) -> Scalar {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.v_);
        return Scalar(fix(T(f(x, y))));
      },
      a.v_);
}

/// Builds constants of a context.
inline Scalar make_scalar(const ScalarContext& ctx, long n) { return Scalar(n).in(ctx); }
inline Scalar make_scalar(const ScalarContext& ctx, const Integer& n) { return Scalar(n).in(ctx); }
inline Scalar laurent_monomial(const ScalarContext& ctx, const Scalar& coeff, long exponent) {
  if (ctx.kind == ScalarKind::QLaurent) {
    auto c = std::get<Rational>(coeff.in(ScalarContext::rationals()).value());
    return Laurent<Rational>::monomial(Rational(1), c, exponent);
  }
  if (ctx.kind == ScalarKind::FpLaurent) {
    auto c = std::get<Modp>(coeff.in(ScalarContext::prime_field(ctx.prime)).value());
    return Laurent<Modp>::monomial(Modp(1, ctx.prime), c, exponent);
  }
  fail(ErrorCode::UnsupportedRing, "no Laurent variable in " + ctx.name());
}

// ---------------------------------------------------------------------------
// Euclidean structure used by Smith normal form.

/// Euclidean norm: |n| over Z, 0/1 over a field, span+1 for Laurent.
inline Integer euclid_norm(const Scalar& s) {
  return std::visit(
      [](const auto& x) -> Integer {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>)
          return abs(x);
        else if constexpr (std::is_same_v<T, Rational>)
          return sgn(x) == 0 ? 0 : 1;
        else if constexpr (std::is_same_v<T, Modp>)
          return x.v == 0 ? 0 : 1;
        else
          return Integer(x.span() + 1);
      },
      s.value());
}

inline bool is_unit(const Scalar& s) { return euclid_norm(s) == 1; }

/// a = q*b + r with r == 0 or norm(r) < norm(b).
inline std::pair<Scalar, Scalar> divmod(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) fail(ErrorCode::UnsupportedRing, "division by zero");
  if (a.kind() != b.kind()) {
    if (a.kind() == ScalarKind::Z) return divmod(Scalar(a) + (b - b), b);
    return divmod(a, b + (a - a));
  }
  return std::visit(
      [&](const auto& x) -> std::pair<Scalar, Scalar> {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.value());
        if constexpr (std::is_same_v<T, Integer>) {
          Integer q, r;
          mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
          return {Scalar(q), Scalar(r)};
        } else if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, Modp>) {
          return {Scalar(T(x * field_inverse(y))), Scalar(T(x - x))};
        } else {
          auto [q, r] = divmod(x, y);
          return {Scalar(q), Scalar(r)};
        }
      },
      a.value());
}

inline bool divides(const Scalar& d, const Scalar& a) {
  if (d.is_zero()) return a.is_zero();
  return divmod(a, d).second.is_zero();
}

/// Inverse of a unit (error if not a unit).
inline Scalar unit_inverse(const Scalar& u) {
  return std::visit(
      [&](const auto& x) -> Scalar {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          if (x == 1 || x == -1) return Scalar(Integer(x));
          fail(ErrorCode::UnsupportedRing, "not a unit in Z: " + x.get_str());
        } else if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, Modp>) {
          return Scalar(field_inverse(x));
        } else {
          if (x.span() != 0) fail(ErrorCode::UnsupportedRing, "not a unit in a Laurent ring");
          return Scalar(T::monomial(x.field_one(), field_inverse(x.leading()), -x.low()));
        }
      },
      u.value());
}

/// Unit u such that u*s is the canonical associate of s: positive over Z,
/// 1 over a field, monic with lowest exponent 0 over a Laurent ring.
inline Scalar normalizing_unit(const Scalar& s) {
  return std::visit(
      [&](const auto& x) -> Scalar {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          return Scalar(sgn(x) < 0 ? -1 : 1);
        } else if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, Modp>) {
          if (is_zero(x)) return Scalar(1);
          return Scalar(field_inverse(x));
        } else {
          if (x.is_zero()) return Scalar(1);
          return Scalar(T::monomial(x.field_one(), field_inverse(x.leading()), -x.low()));
        }
      },
      s.value());
}

inline Scalar unit_normalized(const Scalar& s) { return s * normalizing_unit(s); }

}  // namespace dgm
