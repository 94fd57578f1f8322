#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dgmorse/duality.hpp"
#include "dgmorse/expr.hpp"

namespace dgm {

// ---------------------------------------------------------------------------
// Declarations

struct ModuleDecl {
  DGModule module;
  std::string directive;  // "regular", "trivial", "group-ring", "orientation w" or empty
};

struct CriticalDecl {
  CriticalBasis basis;
};

struct CocycleDecl {
  CocycleMatrix m;
  std::string rows, cols;  // critical basis names
  std::string from, to;    // continuation: m0, m1; homotopy: nu0, nu1
  int shift = 0;           // added to the row indices (continuation)
  std::string directive;   // "transfer m" or "pushforward phi m"
  CriticalBasis row_basis, col_basis;  // resolved, shift applied
};

struct CharacterDecl {
  std::vector<std::pair<std::string, int>> declared;
  SignCharacter w;
};

struct PairingDecl {
  std::string homological, cochain, character, module, scalars = "Z";
};

enum class Route { Twisted, Local, Lifted, Cochain };

inline std::string route_name(Route r) {
  switch (r) {
    case Route::Twisted: return "twisted";
    case Route::Local: return "local";
    case Route::Lifted: return "lifted";
    case Route::Cochain: return "cochain";
  }
  return "?";
}

struct CoeffDecl {
  std::string module, scalars = "Z", cocycle, character;
  Route route = Route::Twisted;
};

struct ModMapDecl {
  std::string from, to;
  ModuleMap map;
};

struct MapDecl {
  std::string cocycle, modmap, over, first, second, module, scalars = "Z";
};

struct Expectation {
  std::string tag;
  int degree = 0;
  std::string value;
};

struct PageExpectation {
  std::string tag;
  int r = 0, p = 0, q = 0;
  long dim = 0;
};

struct Bundle {
  std::string name;
  int dim = 0;
  std::vector<std::string> notes;
  std::string scalars = "Z";
  std::shared_ptr<DGA> R;

  std::map<std::string, ModuleDecl> modules;
  std::map<std::string, CriticalDecl> criticals;
  std::map<std::string, CocycleDecl> cocycles;
  std::map<std::string, DGAMorphism> morphisms;
  std::map<std::string, CharacterDecl> characters;
  std::map<std::string, PairingDecl> pairings;
  std::map<std::string, CoeffDecl> coeffs;
  std::map<std::string, ModMapDecl> modmaps;
  std::map<std::string, MapDecl> maps;
  std::vector<Expectation> expects;
  std::vector<PageExpectation> page_expects;
  std::vector<std::pair<std::string, std::string>> order;  // (kind, name) in declaration order

  Bundle() = default;
  Bundle(const Bundle&) = delete;
  Bundle& operator=(const Bundle&) = delete;
  Bundle(Bundle&&) = default;
  Bundle& operator=(Bundle&&) = default;

  const DGA& algebra() const {
    if (!R) fail(ErrorCode::UnresolvedName, "bundle " + name + " declares no algebra");
    return *R;
  }
  template <class M>
  static const typename M::mapped_type& lookup(const M& m, const std::string& n, const std::string& what) {
    auto it = m.find(n);
    if (it == m.end()) fail(ErrorCode::UnresolvedName, what + " " + n);
    return it->second;
  }
  const DGModule& module(const std::string& n) const { return lookup(modules, n, "module").module; }
  const CriticalBasis& critical(const std::string& n) const { return lookup(criticals, n, "critical basis").basis; }
  const CocycleDecl& cocycle(const std::string& n) const { return lookup(cocycles, n, "cocycle"); }
  const SignCharacter& character(const std::string& n) const { return lookup(characters, n, "character").w; }
  const CoeffDecl& coeff(const std::string& tag) const {
    auto it = coeffs.find(tag);
    if (it == coeffs.end()) fail(ErrorCode::UnknownTag, "no coefficient system '" + tag + "' in " + name);
    return it->second;
  }
};

/// "Z", "Q" or "F<p>".
inline ScalarContext parse_scalars(const std::string& s) {
  if (s == "Z") return ScalarContext::integers();
  if (s == "Q") return ScalarContext::rationals();
  if (s.size() > 1 && s[0] == 'F' && std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return ScalarContext::prime_field(std::stoull(s.substr(1)));
  fail(ErrorCode::SchemaViolation, "unknown scalars '" + s + "' (use Z, Q or F<p>)");
}

inline std::string scalars_name(const ScalarContext& c) {
  switch (c.kind) {
    case ScalarKind::Z: return "Z";
    case ScalarKind::Q: return "Q";
    case ScalarKind::Fp: return "F" + std::to_string(c.prime);
    default: return c.name();
  }
}

// ---------------------------------------------------------------------------
// Builtin modules

/// Rank-one module Z on which the group acts trivially; positive degrees act by 0.
inline DGModule trivial_module(const DGA& R) {
  DGModule M;
  M.name = "trivial";
  M.basis.gens = {{"z", 0}};
  for (int g : R.basis.in_degree(0)) {
    if (g == R.unit) continue;
    auto e = R.h0_of(R.mono(g));
    M.action[{0, R.basis.name(g)}] = e ? M.gen(R, 0) : ModuleElement{};
  }
  for (const auto& v : R.vars) {
    M.action[{0, v}] = M.gen(R, 0);
    M.action[{0, v + "^-1"}] = M.gen(R, 0);
  }
  return M;
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

struct Line {
  int number = 0;
  std::string text;                 // comment stripped
  std::vector<std::string> words;
  std::vector<int> cols;            // 1-based start column of each word
};

inline Line split_line(int number, const std::string& raw) {
  Line l;
  l.number = number;
  std::string t = raw.substr(0, raw.find('#'));
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  l.text = t;
  std::size_t i = 0;
  while (i < t.size()) {
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    if (i >= t.size()) break;
    std::size_t b = i;
    while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    l.words.push_back(t.substr(b, i - b));
    l.cols.push_back(static_cast<int>(b) + 1);
  }
  return l;
}

/// Text after '=' with its column.
inline std::pair<std::string, int> rhs(const Line& l) {
  auto p = l.text.find('=');
  if (p == std::string::npos) syntax_error({l.number, 1}, "expected '='");
  return {l.text.substr(p + 1), static_cast<int>(p) + 2};
}

/// Words before '='.
inline std::vector<std::string> lhs_words(const Line& l) {
  auto p = l.text.find('=');
  Line sub = split_line(l.number, l.text.substr(0, p));
  return sub.words;
}

inline int to_int(const Line& l, std::size_t w) {
  if (w >= l.words.size()) syntax_error({l.number, static_cast<int>(l.text.size()) + 1}, "missing integer");
  try {
    std::size_t used = 0;
    int v = std::stoi(l.words[w], &used);
    if (used != l.words[w].size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    syntax_error({l.number, l.cols[w]}, "expected an integer, got '" + l.words[w] + "'");
  }
}

inline void need(const Line& l, std::size_t n, const std::string& form) {
  if (l.words.size() != n) syntax_error({l.number, 1}, "expected '" + form + "'");
}

class BundleParser {
 public:
  explicit BundleParser(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      Line l = split_line(n, raw);
      if (!l.words.empty()) lines_.push_back(std::move(l));
    }
  }

  Bundle parse() {
    while (pos_ < lines_.size()) {
      const Line& l = lines_[pos_++];
      const std::string& kw = l.words[0];
      if (kw == "bundle") {
        need(l, 2, "bundle NAME");
        b_.name = l.words[1];
      } else if (kw == "dim") {
        need(l, 2, "dim N");
        b_.dim = to_int(l, 1);
      } else if (kw == "note") {
        b_.notes.push_back(l.text.substr(l.cols.size() > 1 ? l.cols[1] - 1 : l.text.size()));
      } else if (kw == "scalars") {
        need(l, 2, "scalars S");
        (void)parse_scalars(l.words[1]);
        b_.scalars = l.words[1];
      } else if (kw == "dga") {
        parse_dga(l, block());
      } else if (kw == "module") {
        need(l, 2, "module NAME");
        parse_module(l, block());
      } else if (kw == "critical") {
        need(l, 2, "critical NAME");
        parse_critical(l, block());
      } else if (kw == "cocycle") {
        parse_cocycle(l, block());
      } else if (kw == "morphism") {
        need(l, 2, "morphism NAME");
        parse_morphism(l, block());
      } else if (kw == "character") {
        need(l, 2, "character NAME");
        parse_character(l, block());
      } else if (kw == "pairing") {
        need(l, 2, "pairing NAME");
        parse_pairing(l, block());
      } else if (kw == "coeff") {
        need(l, 2, "coeff TAG");
        parse_coeff(l, block());
      } else if (kw == "modmap") {
        need(l, 6, "modmap NAME from F to G");
        parse_modmap(l, block());
      } else if (kw == "map") {
        need(l, 2, "map NAME");
        parse_map(l, block());
      } else if (kw == "expect") {
        if (l.words.size() < 4) syntax_error({l.number, 1}, "expected 'expect TAG K VALUE'");
        b_.expects.push_back({l.words[1], to_int(l, 2), l.text.substr(l.cols[3] - 1)});
      } else if (kw == "expect-page") {
        need(l, 6, "expect-page TAG r p q dim");
        b_.page_expects.push_back({l.words[1], to_int(l, 2), to_int(l, 3), to_int(l, 4), to_int(l, 5)});
      } else {
        syntax_error({l.number, 1}, "unknown keyword '" + kw + "'");
      }
    }
    if (b_.name.empty()) {
      if (lines_.empty()) fail(ErrorCode::SchemaViolation, "(root): empty document");
      syntax_error({1, 1}, "missing 'bundle NAME'");
    }
    return std::move(b_);
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  Bundle b_;

  std::vector<Line> block() {
    std::vector<Line> body;
    int start = lines_[pos_ - 1].number;
    while (pos_ < lines_.size()) {
      const Line& l = lines_[pos_++];
      if (l.words[0] == "end") return body;
      body.push_back(l);
    }
    syntax_error({start, 1}, "block is not closed by 'end'");
  }

  void declare(const Line& l, const std::string& kind, const std::string& name) {
    for (const auto& [k, n] : b_.order)
      if (k == kind && n == name) syntax_error({l.number, l.cols.back()}, kind + " '" + name + "' declared twice");
    b_.order.emplace_back(kind, name);
  }

  const DGA& R(const Line& l) const {
    if (!b_.R) syntax_error({l.number, 1}, "declare the dga block first");
    return *b_.R;
  }

  AlgebraElement alg_expr(const Line& l, const DGModule* F = nullptr) const {
    auto [t, c] = rhs(l);
    ExprPtr e = ExprParser(t, {l.number, c}).parse();
    return ExprEvaluator(R(l), F, l.number, false).algebra(e);
  }

  ModuleElement mod_expr(const Line& l, const DGModule& F, bool table) const {
    auto [t, c] = rhs(l);
    ExprPtr e = ExprParser(t, {l.number, c}).parse();
    return ExprEvaluator(R(l), &F, l.number, table).module(e);
  }

  // -- dga ------------------------------------------------------------------

  void parse_dga(const Line& head, const std::vector<Line>& body) {
    if (b_.R) syntax_error({head.number, 1}, "only one dga block is allowed");
    auto R = std::make_shared<DGA>();
    bool window = false;
    std::optional<std::string> unit;
    std::vector<const Line*> deferred;
    std::vector<std::string> group_words;
    for (const auto& l : body) {
      const auto& kw = l.words[0];
      if (kw == "gen") {
        need(l, 3, "gen NAME DEGREE");
        if (R->basis.find(l.words[1])) syntax_error({l.number, l.cols[1]}, "generator '" + l.words[1] + "' declared twice");
        R->basis.gens.push_back({l.words[1], to_int(l, 2)});
      } else if (kw == "window") {
        need(l, 3, "window LO HI");
        R->basis.dmin = to_int(l, 1);
        R->basis.dmax = to_int(l, 2);
        window = true;
      } else if (kw == "unit") {
        need(l, 2, "unit NAME");
        unit = l.words[1];
      } else if (kw == "var") {
        need(l, 2, "var NAME");
        R->vars.push_back(l.words[1]);
      } else if (kw == "ground") {
        need(l, 2, "ground S");
        R->ground = parse_scalars(l.words[1]);
      } else if (kw == "group") {
        if (l.words.size() < 2) syntax_error({l.number, 1}, "expected 'group finite|laurent|none ...'");
        group_words.assign(l.words.begin() + 1, l.words.end());
        if (group_words[0] != "finite" && group_words[0] != "laurent" && group_words[0] != "none")
          syntax_error({l.number, l.cols[1]}, "unknown group kind '" + group_words[0] + "'");
      } else if (kw == "mul" || kw == "diff" || kw == "h0" || kw == "inv") {
        deferred.push_back(&l);
      } else {
        syntax_error({l.number, 1}, "unknown dga line '" + kw + "'");
      }
    }
    if (!unit) syntax_error({head.number, 1}, "dga needs a 'unit' line");
    R->unit = R->basis.find(*unit).value_or(-1);
    if (R->unit < 0) fail(ErrorCode::UnresolvedName, "unit " + *unit);
    if (!window) {
      R->basis.dmin = 0;
      for (const auto& g : R->basis.gens) R->basis.dmax = std::max(R->basis.dmax, g.degree);
    }
    if (!group_words.empty()) {
      if (group_words[0] == "finite") {
        R->group_kind = DGA::GroupKind::Finite;
        for (std::size_t i = 1; i < group_words.size(); ++i) R->group_gens.push_back(R->basis.index(group_words[i]));
      } else if (group_words[0] == "laurent") {
        R->group_kind = DGA::GroupKind::Laurent;
      }
    }
    b_.R = R;
    for (const Line* lp : deferred) {
      const Line& l = *lp;
      auto lw = lhs_words(l);
      const auto& kw = lw[0];
      if (kw == "mul") {
        if (lw.size() != 3) syntax_error({l.number, 1}, "expected 'mul A B = EXPR'");
        R->mul_table[{R->basis.index(lw[1]), R->basis.index(lw[2])}] = alg_expr(l);
      } else if (kw == "diff") {
        if (lw.size() != 2) syntax_error({l.number, 1}, "expected 'diff A = EXPR'");
        AlgebraElement v = alg_expr(l);
        if (!v.is_zero()) R->diff_table[R->basis.index(lw[1])] = v;
      } else if (kw == "inv") {
        if (lw.size() != 2) syntax_error({l.number, 1}, "expected 'inv A = EXPR'");
        if (!R->involution) R->involution.emplace();
        (*R->involution)[R->basis.index(lw[1])] = alg_expr(l);
      } else {
        if (lw.size() != 2) syntax_error({l.number, 1}, "expected 'h0 A = ELEMENT'");
        int g = R->basis.index(lw[1]);
        AlgebraElement v = alg_expr(l);
        if (v.is_zero()) {
          R->h0_image[g] = std::nullopt;
          continue;
        }
        if (v.terms.size() != 1 || !(v.terms.begin()->second == Scalar(1)))
          syntax_error({l.number, 1}, "h0 image must be a single group element");
        const Monomial& m = v.terms.begin()->first;
        if (R->group_kind == DGA::GroupKind::Laurent) {
          if (m.gen != R->unit) syntax_error({l.number, 1}, "h0 image must be a monomial in the variables");
          R->h0_image[g] = m.exps;
        } else {
          long idx = -1;
          for (std::size_t k = 0; k < R->group_gens.size(); ++k)
            if (R->group_gens[k] == m.gen) idx = static_cast<long>(k);
          if (idx < 0) syntax_error({l.number, 1}, "h0 image must be a group element");
          R->h0_image[g] = Group::Elem{idx};
        }
      }
    }
    declare(head, "dga", "");
  }

  // -- modules --------------------------------------------------------------

  void parse_module(const Line& head, const std::vector<Line>& body) {
    const DGA& A = R(head);
    ModuleDecl d;
    d.module.name = head.words[1];
    std::vector<const Line*> deferred;
    for (const auto& l : body) {
      const auto& kw = l.words[0];
      if (kw == "gen") {
        need(l, 3, "gen NAME DEGREE");
        d.module.basis.gens.push_back({l.words[1], to_int(l, 2)});
      } else if (kw == "laurent-free") {
        d.module.laurent_free = true;
      } else if (kw == "regular" || kw == "trivial" || kw == "group-ring") {
        d.directive = kw;
      } else if (kw == "orientation") {
        need(l, 2, "orientation CHARACTER");
        d.directive = "orientation " + l.words[1];
      } else if (kw == "act" || kw == "diff") {
        deferred.push_back(&l);
      } else {
        syntax_error({l.number, 1}, "unknown module line '" + kw + "'");
      }
    }
    if (!d.directive.empty()) {
      if (!deferred.empty() || !d.module.basis.gens.empty())
        syntax_error({head.number, 1}, "a builtin module takes no generators or tables");
      if (d.directive == "regular")
        d.module = regular_module(A, head.words[1]);
      else if (d.directive == "trivial")
        d.module = trivial_module(A);
      else if (d.directive == "group-ring")
        d.module = group_ring_module(A);
      else
        d.module = orientation_system(b_.character(d.directive.substr(12)), A);
      d.module.name = head.words[1];
    }
    for (const auto& g : d.module.basis.gens) {
      d.module.basis.dmin = std::min(d.module.basis.dmin, g.degree);
      d.module.basis.dmax = std::max(d.module.basis.dmax, g.degree);
    }
    for (const Line* lp : deferred) {
      const Line& l = *lp;
      auto lw = lhs_words(l);
      if (lw[0] == "act") {
        if (lw.size() != 3) syntax_error({l.number, 1}, "expected 'act GEN ACTOR = EXPR'");
        int g = d.module.basis.index(lw[1]);
        const std::string& actor = lw[2];
        std::string base = actor.substr(0, actor.find("^-1"));
        bool var = std::find(A.vars.begin(), A.vars.end(), base) != A.vars.end();
        if (!var && !A.basis.find(actor)) fail(ErrorCode::UnresolvedName, "line " + std::to_string(l.number) + ": actor " + actor);
        d.module.action[{g, actor}] = mod_expr(l, d.module, true);
      } else {
        if (lw.size() != 2) syntax_error({l.number, 1}, "expected 'diff GEN = EXPR'");
        ModuleElement v = mod_expr(l, d.module, true);
        if (!v.is_zero()) d.module.diff[d.module.basis.index(lw[1])] = v;
      }
    }
    declare(head, "module", head.words[1]);
    b_.modules[head.words[1]] = std::move(d);
  }

  void parse_critical(const Line& head, const std::vector<Line>& body) {
    CriticalDecl d;
    d.basis.ambient_dim = b_.dim;
    for (const auto& l : body) {
      if (l.words[0] == "point") {
        need(l, 3, "point NAME INDEX");
        d.basis.points.push_back({l.words[1], to_int(l, 2)});
      } else if (l.words[0] == "dim") {
        need(l, 2, "dim N");
        d.basis.ambient_dim = to_int(l, 1);
      } else {
        syntax_error({l.number, 1}, "unknown critical line '" + l.words[0] + "'");
      }
    }
    declare(head, "critical", head.words[1]);
    b_.criticals[head.words[1]] = std::move(d);
  }

  // -- cocycles -------------------------------------------------------------

  void parse_cocycle(const Line& head, const std::vector<Line>& body) {
    const DGA& A = R(head);
    const auto& w = head.words;
    if (w.size() < 4) syntax_error({head.number, 1}, "expected 'cocycle NAME KIND ...'");
    CocycleDecl d;
    d.m.name = w[1];
    const std::string& kind = w[2];
    if (kind == "twisting" || kind == "cohomological") {
      if (w.size() != 5 || w[3] != "on") syntax_error({head.number, 1}, "expected 'cocycle NAME " + kind + " on BASIS'");
      d.m.kind = kind == "twisting" ? CocycleKind::Twisting : CocycleKind::Cohomological;
      d.rows = d.cols = w[4];
      d.row_basis = d.col_basis = b_.critical(w[4]);
    } else if (kind == "continuation" || kind == "homotopy") {
      bool cont = kind == "continuation";
      bool ok = (w.size() == 7 || (cont && w.size() == 9)) && w[3] == "from" && w[5] == "to";
      if (cont && w.size() == 9) ok = ok && w[7] == "shift";
      if (!ok) syntax_error({head.number, 1}, "expected 'cocycle NAME " + kind + " from A to B" + (cont ? " [shift S]'" : "'"));
      d.m.kind = cont ? CocycleKind::Continuation : CocycleKind::Homotopy;
      d.from = w[4];
      d.to = w[6];
      const auto& a = b_.cocycle(d.from);
      const auto& c = b_.cocycle(d.to);
      if (cont) {
        if (w.size() == 9) d.shift = to_int(head, 8);
        d.rows = a.rows;
        d.cols = c.rows;
        d.row_basis = a.row_basis.shifted(d.shift);
        d.col_basis = c.row_basis;
      } else {
        if (a.m.kind != CocycleKind::Continuation || c.m.kind != CocycleKind::Continuation)
          syntax_error({head.number, 1}, "homotopies go between continuation cocycles");
        if (a.rows != c.rows || a.cols != c.cols || a.shift != c.shift)
          syntax_error({head.number, 1}, "continuation cocycles " + d.from + " and " + d.to + " have different endpoints");
        d.rows = a.rows;
        d.cols = a.cols;
        d.shift = a.shift;
        d.row_basis = a.row_basis;
        d.col_basis = a.col_basis;
      }
    } else {
      syntax_error({head.number, head.cols[2]}, "unknown cocycle kind '" + kind + "'");
    }
    for (const auto& l : body) {
      const auto& kw = l.words[0];
      if (kw == "entry") {
        auto lw = lhs_words(l);
        if (lw.size() != 3) syntax_error({l.number, 1}, "expected 'entry X Y = EXPR'");
        d.m.set(d.row_basis.find(lw[1]), d.col_basis.find(lw[2]), alg_expr(l));
      } else if (kw == "transfer") {
        need(l, 2, "transfer COCYCLE");
        if (d.m.kind != CocycleKind::Cohomological) syntax_error({l.number, 1}, "transfer builds cohomological cocycles");
        const auto& src = b_.cocycle(l.words[1]);
        if (src.rows != d.rows) syntax_error({l.number, 1}, "transfer source lives on another basis");
        d.m = cohomological_cocycle(A, d.row_basis, src.m, d.m.name);
        d.directive = "transfer " + l.words[1];
      } else if (kw == "pushforward") {
        need(l, 3, "pushforward MORPHISM COCYCLE");
        if (d.m.kind != CocycleKind::Twisting) syntax_error({l.number, 1}, "pushforward builds twisting cocycles");
        const auto& phi = lookup_morphism(l, l.words[1]);
        const auto& src = b_.cocycle(l.words[2]);
        std::string nm = d.m.name;
        d.m = pushforward_cocycle(phi, src.m, d.row_basis);
        d.m.name = nm;
        d.directive = "pushforward " + l.words[1] + " " + l.words[2];
      } else {
        syntax_error({l.number, 1}, "unknown cocycle line '" + kw + "'");
      }
    }
    auto deg = check_cocycle_degrees(A, d.row_basis, d.col_basis, d.m);
    if (!deg.ok()) fail(ErrorCode::SchemaViolation, "cocycle " + w[1] + ": " + deg.issues.front());
    declare(head, "cocycle", w[1]);
    b_.cocycles[w[1]] = std::move(d);
  }

  const DGAMorphism& lookup_morphism(const Line& l, const std::string& n) const {
    auto it = b_.morphisms.find(n);
    if (it == b_.morphisms.end()) fail(ErrorCode::UnresolvedName, "line " + std::to_string(l.number) + ": morphism " + n);
    return it->second;
  }

  void parse_morphism(const Line& head, const std::vector<Line>& body) {
    const DGA& A = R(head);
    DGAMorphism phi;
    phi.source = phi.target = b_.R.get();
    for (int g = 0; g < static_cast<int>(A.basis.size()); ++g)
      if (g != A.unit) phi.gen_image[g] = A.gen(g);
    for (std::size_t v = 0; v < A.nvars(); ++v) {
      phi.var_image.push_back(A.var_power(v, 1));
      phi.var_inv_image.push_back(A.var_power(v, -1));
    }
    for (const auto& l : body) {
      auto lw = lhs_words(l);
      if (lw[0] != "image" || lw.size() != 2) syntax_error({l.number, 1}, "expected 'image X = EXPR'");
      const std::string& x = lw[1];
      AlgebraElement v = alg_expr(l);
      bool done = false;
      for (std::size_t k = 0; k < A.nvars(); ++k) {
        if (x == A.vars[k]) phi.var_image[k] = v, done = true;
        if (x == A.vars[k] + "^-1") phi.var_inv_image[k] = v, done = true;
      }
      if (!done) phi.gen_image[A.basis.index(x)] = v;
    }
    declare(head, "morphism", head.words[1]);
    b_.morphisms[head.words[1]] = std::move(phi);
  }

  void parse_character(const Line& head, const std::vector<Line>& body) {
    const DGA& A = R(head);
    CharacterDecl d;
    Group G = A.group();
    std::map<Group::Elem, int> vals;
    for (const auto& l : body) {
      auto lw = lhs_words(l);
      if (lw[0] != "value" || lw.size() != 2) syntax_error({l.number, 1}, "expected 'value ELEMENT = ±1'");
      auto [t, c] = rhs(l);
      int v = 0;
      std::string s = split_line(l.number, t).words.empty() ? "" : split_line(l.number, t).words[0];
      if (s == "1" || s == "+1")
        v = 1;
      else if (s == "-1")
        v = -1;
      else
        syntax_error({l.number, c}, "character values are +1 or -1");
      Group::Elem e;
      if (G.kind == Group::Kind::FreeAbelian) {
        auto it = std::find(G.names.begin(), G.names.end(), lw[1]);
        if (it == G.names.end()) fail(ErrorCode::UnresolvedName, "group variable " + lw[1]);
        e.assign(G.names.size(), 0);
        e[it - G.names.begin()] = 1;
      } else {
        auto it = std::find(G.names.begin(), G.names.end(), lw[1]);
        if (it == G.names.end()) fail(ErrorCode::UnresolvedName, "group element " + lw[1]);
        e = {static_cast<long>(it - G.names.begin())};
      }
      if (vals.count(e) && vals[e] != v) fail(ErrorCode::InconsistentCharacter, "two values for " + lw[1]);
      vals[e] = v;
      d.declared.emplace_back(lw[1], v);
    }
    d.w = close_character(G, vals, head.words[1]);
    declare(head, "character", head.words[1]);
    b_.characters[head.words[1]] = std::move(d);
  }

  static void set_field(const Line& l, std::string& slot) {
    need(l, 2, l.words[0] + " NAME");
    slot = l.words[1];
  }

  void parse_pairing(const Line& head, const std::vector<Line>& body) {
    PairingDecl d;
    d.scalars = b_.scalars;
    for (const auto& l : body) {
      const auto& kw = l.words[0];
      if (kw == "homological") set_field(l, d.homological);
      else if (kw == "cochain") set_field(l, d.cochain);
      else if (kw == "character") set_field(l, d.character);
      else if (kw == "module") set_field(l, d.module);
      else if (kw == "scalars") set_field(l, d.scalars);
      else syntax_error({l.number, 1}, "unknown pairing line '" + kw + "'");
    }
    if (d.homological.empty() || d.cochain.empty() || d.module.empty())
      syntax_error({head.number, 1}, "pairing needs homological, cochain and module lines");
    (void)b_.cocycle(d.homological);
    (void)b_.cocycle(d.cochain);
    (void)b_.module(d.module);
    if (!d.character.empty()) (void)b_.character(d.character);
    (void)parse_scalars(d.scalars);
    declare(head, "pairing", head.words[1]);
    b_.pairings[head.words[1]] = std::move(d);
  }

  void parse_coeff(const Line& head, const std::vector<Line>& body) {
    CoeffDecl d;
    d.scalars = b_.scalars;
    for (const auto& l : body) {
      const auto& kw = l.words[0];
      if (kw == "module") set_field(l, d.module);
      else if (kw == "scalars") set_field(l, d.scalars);
      else if (kw == "cocycle") set_field(l, d.cocycle);
      else if (kw == "character") set_field(l, d.character);
      else if (kw == "route") {
        need(l, 2, "route twisted|local|lifted|cochain");
        const auto& r = l.words[1];
        if (r == "twisted") d.route = Route::Twisted;
        else if (r == "local") d.route = Route::Local;
        else if (r == "lifted") d.route = Route::Lifted;
        else if (r == "cochain") d.route = Route::Cochain;
        else syntax_error({l.number, l.cols[1]}, "unknown route '" + r + "'");
      } else {
        syntax_error({l.number, 1}, "unknown coeff line '" + kw + "'");
      }
    }
    if (d.cocycle.empty()) syntax_error({head.number, 1}, "coeff needs a cocycle line");
    if (d.module.empty() && d.route != Route::Lifted) syntax_error({head.number, 1}, "coeff needs a module line");
    (void)b_.cocycle(d.cocycle);
    if (!d.module.empty()) (void)b_.module(d.module);
    if (!d.character.empty()) (void)b_.character(d.character);
    (void)parse_scalars(d.scalars);
    declare(head, "coeff", head.words[1]);
    b_.coeffs[head.words[1]] = std::move(d);
  }

  void parse_modmap(const Line& head, const std::vector<Line>& body) {
    const DGA& A = R(head);
    if (head.words[2] != "from" || head.words[4] != "to") syntax_error({head.number, 1}, "expected 'modmap NAME from F to G'");
    ModMapDecl d;
    d.from = head.words[3];
    d.to = head.words[5];
    d.map.name = head.words[1];
    d.map.source = &b_.lookup(b_.modules, d.from, "module").module;
    d.map.target = &b_.lookup(b_.modules, d.to, "module").module;
    for (const auto& l : body) {
      auto lw = lhs_words(l);
      if (lw[0] != "image" || lw.size() != 2) syntax_error({l.number, 1}, "expected 'image GEN = EXPR'");
      d.map.images[d.map.source->basis.index(lw[1])] = mod_expr(l, *d.map.target, false);
    }
    (void)A;
    declare(head, "modmap", head.words[1]);
    b_.modmaps[head.words[1]] = std::move(d);
  }

  void parse_map(const Line& head, const std::vector<Line>& body) {
    MapDecl d;
    d.scalars = b_.scalars;
    for (const auto& l : body) {
      const auto& kw = l.words[0];
      if (kw == "cocycle") set_field(l, d.cocycle);
      else if (kw == "modmap") set_field(l, d.modmap);
      else if (kw == "over") set_field(l, d.over);
      else if (kw == "module") set_field(l, d.module);
      else if (kw == "scalars") set_field(l, d.scalars);
      else if (kw == "compose") {
        need(l, 3, "compose FIRST SECOND");
        d.first = l.words[1];
        d.second = l.words[2];
      } else {
        syntax_error({l.number, 1}, "unknown map line '" + kw + "'");
      }
    }
    int kinds = !d.cocycle.empty() + !d.modmap.empty() + !d.first.empty();
    if (kinds != 1) syntax_error({head.number, 1}, "map needs exactly one of cocycle, modmap or compose");
    if (!d.modmap.empty() && d.over.empty()) syntax_error({head.number, 1}, "modmap maps need an 'over' twisting cocycle");
    if (!d.cocycle.empty() && d.module.empty()) syntax_error({head.number, 1}, "cocycle maps need a module line");
    if (!d.first.empty()) {
      (void)b_.lookup(b_.maps, d.first, "map");
      (void)b_.lookup(b_.maps, d.second, "map");
    }
    declare(head, "map", head.words[1]);
    b_.maps[head.words[1]] = std::move(d);
  }
};

}  // namespace detail

inline Bundle parse_bundle(const std::string& text) { return detail::BundleParser(text).parse(); }

inline Bundle load_bundle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::SchemaViolation, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bundle(ss.str());
}

// ---------------------------------------------------------------------------
// Canonical rendering

inline std::string render_bundle(const Bundle& b) {
  std::ostringstream o;
  o << "bundle " << b.name << "\n";
  o << "dim " << b.dim << "\n";
  for (const auto& n : b.notes) o << "note " << n << "\n";
  o << "scalars " << b.scalars << "\n";
  for (const auto& [kind, name] : b.order) {
    o << "\n";
    if (kind == "dga") {
      const DGA& R = *b.R;
      o << "dga\n";
      if (R.ground.kind != ScalarKind::Z) o << "  ground " << scalars_name(R.ground) << "\n";
      for (const auto& g : R.basis.gens) o << "  gen " << g.name << " " << g.degree << "\n";
      o << "  window " << R.basis.dmin << " " << R.basis.dmax << "\n";
      o << "  unit " << R.basis.name(R.unit) << "\n";
      for (const auto& v : R.vars) o << "  var " << v << "\n";
      if (R.group_kind == DGA::GroupKind::Finite) {
        o << "  group finite";
        for (int g : R.group_gens) o << " " << R.basis.name(g);
        o << "\n";
      } else if (R.group_kind == DGA::GroupKind::Laurent) {
        o << "  group laurent\n";
      }
      for (const auto& [k, v] : R.mul_table) o << "  mul " << R.basis.name(k.first) << " " << R.basis.name(k.second) << " = " << R.to_string(v) << "\n";
      for (const auto& [g, v] : R.diff_table) o << "  diff " << R.basis.name(g) << " = " << R.to_string(v) << "\n";
      for (const auto& [g, e] : R.h0_image) {
        o << "  h0 " << R.basis.name(g) << " = ";
        o << (e ? R.to_string(R.from_group(*e)) : std::string("0")) << "\n";
      }
      if (R.involution)
        for (const auto& [g, v] : *R.involution) o << "  inv " << R.basis.name(g) << " = " << R.to_string(v) << "\n";
      o << "end\n";
    } else if (kind == "module") {
      const auto& d = b.modules.at(name);
      const DGA& R = *b.R;
      o << "module " << name << "\n";
      if (!d.directive.empty()) {
        o << "  " << d.directive << "\n";
      } else {
        const auto& F = d.module;
        for (const auto& g : F.basis.gens) o << "  gen " << g.name << " " << g.degree << "\n";
        if (F.laurent_free) o << "  laurent-free\n";
        for (const auto& [k, v] : F.action) o << "  act " << F.basis.name(k.first) << " " << k.second << " = " << F.to_string(R, v) << "\n";
        for (const auto& [g, v] : F.diff) o << "  diff " << F.basis.name(g) << " = " << F.to_string(R, v) << "\n";
      }
      o << "end\n";
    } else if (kind == "critical") {
      const auto& C = b.criticals.at(name).basis;
      o << "critical " << name << "\n";
      if (C.ambient_dim != b.dim) o << "  dim " << C.ambient_dim << "\n";
      for (const auto& p : C.points) o << "  point " << p.name << " " << p.index << "\n";
      o << "end\n";
    } else if (kind == "cocycle") {
      const auto& d = b.cocycles.at(name);
      const DGA& R = *b.R;
      o << "cocycle " << name << " " << kind_name(d.m.kind);
      if (d.m.kind == CocycleKind::Twisting || d.m.kind == CocycleKind::Cohomological)
        o << " on " << d.rows;
      else
        o << " from " << d.from << " to " << d.to;
      if (d.m.kind == CocycleKind::Continuation && d.shift != 0) o << " shift " << d.shift;
      o << "\n";
      if (!d.directive.empty())
        o << "  " << d.directive << "\n";
      else
        for (const auto& [k, v] : d.m.entries)
          o << "  entry " << d.row_basis.name(k.first) << " " << d.col_basis.name(k.second) << " = " << R.to_string(v) << "\n";
      o << "end\n";
    } else if (kind == "morphism") {
      const auto& phi = b.morphisms.at(name);
      const DGA& R = *b.R;
      o << "morphism " << name << "\n";
      for (const auto& [g, v] : phi.gen_image) o << "  image " << R.basis.name(g) << " = " << R.to_string(v) << "\n";
      for (std::size_t v = 0; v < R.nvars(); ++v) {
        o << "  image " << R.vars[v] << " = " << R.to_string(phi.var_image[v]) << "\n";
        o << "  image " << R.vars[v] << "^-1 = " << R.to_string(phi.var_inv_image[v]) << "\n";
      }
      o << "end\n";
    } else if (kind == "character") {
      o << "character " << name << "\n";
      for (const auto& [e, v] : b.characters.at(name).declared) o << "  value " << e << " = " << v << "\n";
      o << "end\n";
    } else if (kind == "pairing") {
      const auto& d = b.pairings.at(name);
      o << "pairing " << name << "\n  homological " << d.homological << "\n  cochain " << d.cochain << "\n";
      if (!d.character.empty()) o << "  character " << d.character << "\n";
      o << "  module " << d.module << "\n  scalars " << d.scalars << "\nend\n";
    } else if (kind == "coeff") {
      const auto& d = b.coeffs.at(name);
      o << "coeff " << name << "\n";
      if (!d.module.empty()) o << "  module " << d.module << "\n";
      o << "  scalars " << d.scalars << "\n  cocycle " << d.cocycle << "\n";
      if (!d.character.empty()) o << "  character " << d.character << "\n";
      o << "  route " << route_name(d.route) << "\nend\n";
    } else if (kind == "modmap") {
      const auto& d = b.modmaps.at(name);
      o << "modmap " << name << " from " << d.from << " to " << d.to << "\n";
      for (const auto& [g, v] : d.map.images)
        o << "  image " << d.map.source->basis.name(g) << " = " << d.map.target->to_string(*b.R, v) << "\n";
      o << "end\n";
    } else if (kind == "map") {
      const auto& d = b.maps.at(name);
      o << "map " << name << "\n";
      if (!d.cocycle.empty()) o << "  cocycle " << d.cocycle << "\n";
      if (!d.modmap.empty()) o << "  modmap " << d.modmap << "\n  over " << d.over << "\n";
      if (!d.first.empty()) o << "  compose " << d.first << " " << d.second << "\n";
      if (!d.module.empty()) o << "  module " << d.module << "\n";
      o << "  scalars " << d.scalars << "\nend\n";
    }
  }
  if (!b.expects.empty() || !b.page_expects.empty()) o << "\n";
  for (const auto& e : b.expects) o << "expect " << e.tag << " " << e.degree << " " << e.value << "\n";
  for (const auto& e : b.page_expects) o << "expect-page " << e.tag << " " << e.r << " " << e.p << " " << e.q << " " << e.dim << "\n";
  return o.str();
}

}  // namespace dgm
