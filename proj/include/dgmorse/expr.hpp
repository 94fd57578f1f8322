#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgmorse/module.hpp"

namespace dgm {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

[[noreturn]] inline void syntax_error(SourceLoc at, const std::string& msg) {
  fail(ErrorCode::SyntaxError, "line " + std::to_string(at.line) + ", col " + std::to_string(at.col) + ": " + msg);
}

// expr   := term (('+'|'-') term)*
// term   := ['-'] factor ('*' factor)*
// factor := number ['/' number] | ident ['^' ['-'] int] | '(' expr ')' ['^' int] | 'd' '(' expr ')'
struct ExprNode {
  enum class Kind { Number, Ident, Pow, Neg, Add, Sub, Mul, D };
  Kind kind = Kind::Number;
  Scalar number;
  std::string ident;
  long exponent = 0;
  int col = 0;
  std::shared_ptr<ExprNode> a, b;
};
using ExprPtr = std::shared_ptr<ExprNode>;

class ExprParser {
 public:
  ExprParser(std::string text, SourceLoc start) : s_(std::move(text)), start_(start) {}

  ExprPtr parse() {
    skip();
    if (i_ >= s_.size()) error("empty expression");
    ExprPtr e = expr();
    skip();
    if (i_ < s_.size()) error(std::string("unexpected '") + s_[i_] + "'");
    return e;
  }

 private:
  std::string s_;
  SourceLoc start_;
  std::size_t i_ = 0;

  [[noreturn]] void error(const std::string& msg) const { syntax_error({start_.line, start_.col + static_cast<int>(i_)}, msg); }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  ExprPtr node(ExprNode::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    n->col = start_.col + static_cast<int>(i_);
    return n;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      if (peek('+')) {
        ++i_;
        e = node(ExprNode::Kind::Add, e, term());
      } else if (peek('-')) {
        ++i_;
        e = node(ExprNode::Kind::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    bool neg = false;
    if (peek('-')) {
      ++i_;
      neg = true;
    }
    ExprPtr e = factor();
    while (peek('*')) {
      ++i_;
      e = node(ExprNode::Kind::Mul, e, factor());
    }
    return neg ? node(ExprNode::Kind::Neg, e) : e;
  }

  long integer(bool allow_sign) {
    skip();
    bool neg = false;
    if (allow_sign && i_ < s_.size() && s_[i_] == '-') {
      neg = true;
      ++i_;
    }
    std::size_t b = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (b == i_) error("expected an integer");
    long v = std::stol(s_.substr(b, i_ - b));
    return neg ? -v : v;
  }

  ExprPtr factor() {
    skip();
    if (i_ >= s_.size()) error("unexpected end of expression");
    char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      Integer num(s_.substr(b, i_ - b));
      ExprPtr n = node(ExprNode::Kind::Number);
      if (peek('/')) {
        ++i_;
        skip();
        std::size_t d0 = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (d0 == i_) error("expected a denominator");
        Integer den(s_.substr(d0, i_ - d0));
        if (den == 0) error("zero denominator");
        n->number = Scalar(Rational(num, den));
      } else {
        n->number = Scalar(num);
      }
      return n;
    }
    if (c == '(') {
      ++i_;
      ExprPtr e = expr();
      if (!peek(')')) error("expected ')'");
      ++i_;
      if (peek('^')) {
        ++i_;
        ExprPtr p = node(ExprNode::Kind::Pow, e);
        p->exponent = integer(false);
        return p;
      }
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '[') {
      std::size_t b = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\'' ||
                                s_[i_] == '[' || s_[i_] == ']'))
        ++i_;
      std::string id = s_.substr(b, i_ - b);
      if (id == "d" && peek('(')) {
        ++i_;
        ExprPtr e = expr();
        if (!peek(')')) error("expected ')'");
        ++i_;
        return node(ExprNode::Kind::D, e);
      }
      ExprPtr n = node(ExprNode::Kind::Ident);
      n->col = start_.col + static_cast<int>(b);
      n->ident = id;
      if (peek('^')) {
        ++i_;
        ExprPtr p = node(ExprNode::Kind::Pow, n);
        p->exponent = integer(true);
        return p;
      }
      return n;
    }
    error(std::string("unexpected '") + c + "'");
  }
};

/// Evaluates expressions against an algebra and, optionally, a module. In
/// table mode module values may only be scaled or moved by Laurent variables.
class ExprEvaluator {
 public:
  struct Value {
    AlgebraElement alg;
    std::optional<ModuleElement> mod;
  };

  ExprEvaluator(const DGA& R, const DGModule* F, int line, bool table_mode) : R_(R), F_(F), line_(line), table_(table_mode) {}

  AlgebraElement algebra(const ExprPtr& e) const {
    Value v = eval(e);
    if (v.mod) syntax_error({line_, e->col}, "module generator in an algebra expression");
    return v.alg;
  }

  ModuleElement module(const ExprPtr& e) const {
    Value v = eval(e);
    if (!v.mod) {
      if (v.alg.is_zero()) return {};
      syntax_error({line_, e->col}, "expected a module element");
    }
    return *v.mod;
  }

 private:
  const DGA& R_;
  const DGModule* F_;
  int line_;
  bool table_;

  [[noreturn]] void error(const ExprPtr& e, const std::string& msg) const { syntax_error({line_, e->col}, msg); }

  std::optional<std::size_t> var_index(const std::string& n) const {
    for (std::size_t v = 0; v < R_.nvars(); ++v)
      if (R_.vars[v] == n) return v;
    return std::nullopt;
  }

  static bool central(const AlgebraElement& a, int unit) {
    for (const auto& [m, c] : a.terms)
      if (m.gen != unit) return false;
    return true;
  }

  ModuleElement act(const ExprPtr& at, const ModuleElement& x, const AlgebraElement& a) const {
    if (!table_) return F_->act(R_, x, a);
    ModuleElement r;
    for (const auto& [m, c] : a.terms) {
      if (m.gen != R_.unit) error(at, "module tables take combinations of generators only");
      bool moves = false;
      for (long e : m.exps) moves |= e != 0;
      if (moves && !F_->laurent_free) error(at, "variables act through 'act' entries on this module");
      r.add(x.shifted(m.exps), c);
    }
    return r;
  }

  Value eval(const ExprPtr& e) const {
    using K = ExprNode::Kind;
    switch (e->kind) {
      case K::Number: return {R_.one().scaled(e->number.in(R_.ground)), std::nullopt};
      case K::Ident: {
        if (F_) {
          if (auto g = F_->basis.find(e->ident)) return {{}, F_->gen(R_, *g)};
        }
        if (auto v = var_index(e->ident)) return {R_.var_power(*v, 1), std::nullopt};
        if (auto g = R_.basis.find(e->ident)) return {R_.gen(*g), std::nullopt};
        fail(ErrorCode::UnresolvedName, "line " + std::to_string(line_) + ", col " + std::to_string(e->col) + ": unknown name '" +
                                            e->ident + "'");
      }
      case K::Pow: {
        if (e->a->kind == K::Ident)
          if (auto v = var_index(e->a->ident)) return {R_.var_power(*v, e->exponent), std::nullopt};
        if (e->exponent < 0) error(e, "negative power of a non-invertible element");
        Value base = eval(e->a);
        if (base.mod) error(e, "power of a module element");
        AlgebraElement r = R_.one();
        for (long k = 0; k < e->exponent; ++k) r = R_.mul(r, base.alg);
        return {r, std::nullopt};
      }
      case K::Neg: {
        Value v = eval(e->a);
        if (v.mod) return {{}, v.mod->scaled(Scalar(-1))};
        return {v.alg.scaled(Scalar(-1)), std::nullopt};
      }
      case K::Add:
      case K::Sub: {
        Value a = eval(e->a), b = eval(e->b);
        Scalar s = e->kind == K::Add ? Scalar(1) : Scalar(-1);
        if (a.mod || b.mod) {
          if ((!a.mod && !a.alg.is_zero()) || (!b.mod && !b.alg.is_zero())) error(e, "sum mixes algebra and module terms");
          ModuleElement r = a.mod ? *a.mod : ModuleElement{};
          if (b.mod) r.add(*b.mod, s);
          return {{}, r};
        }
        AlgebraElement r = a.alg;
        r.add(b.alg, s);
        return {r, std::nullopt};
      }
      case K::Mul: {
        Value a = eval(e->a), b = eval(e->b);
        if (a.mod && b.mod) error(e, "product of two module elements");
        if (a.mod) return {{}, act(e, *a.mod, b.alg)};
        if (b.mod) {
          if (!central(a.alg, R_.unit)) error(e, "algebra generators act from the right");
          return {{}, act(e, *b.mod, a.alg)};
        }
        return {R_.mul(a.alg, b.alg), std::nullopt};
      }
      case K::D: {
        Value v = eval(e->a);
        if (v.mod) return {{}, F_->d(*v.mod)};
        return {R_.d(v.alg), std::nullopt};
      }
    }
    error(e, "bad expression");
  }
};

}  // namespace dgm
