#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgmorse/morphisms.hpp"

namespace dgm {

/// m∨_{y∨,x∨} = (−1)^{|x||y|+|x|+1} I(m_{x,y}); stored under (y, x).
inline CocycleMatrix cohomological_cocycle(const DGA& R, const CriticalBasis& C, const CocycleMatrix& m, std::string name = "") {
  CocycleMatrix out;
  out.name = name.empty() ? m.name + "_dual" : std::move(name);
  out.kind = CocycleKind::Cohomological;
  for (const auto& [k, v] : m.entries) {
    long x = C.index(k.first), y = C.index(k.second);
    out.set(k.second, k.first, R.inv(v).scaled(parity_sign(x * y + x + 1)));
  }
  return out;
}

/// ∂m_{x∨,z∨} = Σ_y (−1)^{|y|−|x|} m_{x∨,y∨} m_{y∨,z∨}, the condition for d∘d = 0 on cochains.
inline Diagnostic check_cohomological_mc(const CriticalBasis& C, const DGA& R, const CocycleMatrix& mv) {
  Diagnostic diag;
  for (const auto& s : check_cocycle_degrees(R, C, C, mv).issues) diag.notes.push_back(s);
  const int n = static_cast<int>(C.size());
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) {
      if (C.index(z) <= C.index(x)) continue;
      AlgebraElement rhs;
      for (int y = 0; y < n; ++y) {
        AlgebraElement a = mv.at(x, y), b = mv.at(y, z);
        if (a.is_zero() || b.is_zero()) continue;
        rhs.add(R.mul(a, b), parity_sign(C.index(y) - C.index(x)));
      }
      AlgebraElement res = R.d(mv.at(x, z)).minus(rhs);
      if (!res.is_zero()) diag.failures.push_back({C.name(x) + "∨", C.name(z) + "∨", R.to_string(res)});
    }
  return diag;
}

/// d(α⊗x∨) = ∂α⊗x∨ + (−1)^{|α|} Σ α·m∨_{x∨,y∨} ⊗ y∨ on a cohomological module.
/// Cohomological degree c is stored at homological degree −c.
inline ChainComplex build_cochain_complex(const DGModule& Fbar, const DGA& R, const CriticalBasis& C, const CocycleMatrix& mv,
                                          const ScalarContext& scalars, bool certify = true) {
  if (Fbar.sense != Sense::Cohomological) fail(ErrorCode::SchemaViolation, "module " + Fbar.name + " is homological");
  ChainComplex X;
  X.ctx = complex_context(Fbar, R, scalars);
  std::map<std::pair<int, int>, std::pair<int, std::size_t>> pos;
  for (int x = 0; x < static_cast<int>(C.size()); ++x)
    for (int a = 0; a < static_cast<int>(Fbar.basis.size()); ++a) {
      int k = -(Fbar.basis.degree(a) + C.index(x));
      pos[{a, x}] = {k, X.rank(k)};
      X.add_generator(k, Fbar.basis.name(a) + "⊗" + C.name(x) + "∨", C.index(x));
    }
  std::map<int, Matrix> mats;
  for (int k = X.min_degree(); k <= X.max_degree(); ++k) mats.emplace(k, Matrix(X.ctx, X.rank(k - 1), X.rank(k)));
  for (const auto& [key, p] : pos) {
    auto [a, x] = key;
    auto [k, col] = p;
    Matrix& M = mats.at(k);
    auto put = [&](const ModuleElement& e, int y, const Scalar& s) {
      for (const auto& [mono, c] : e.terms) {
        auto it = pos.find({mono.gen, y});
        if (it == pos.end() || it->second.first != k - 1)
          fail(ErrorCode::DegreeMismatch, "cochain differential leaves cohomological degree " + std::to_string(1 - k));
        M.add_to(it->second.second, col, coefficient(X.ctx, mono, c * s));
      }
    };
    ModuleElement alpha = Fbar.gen(R, a);
    put(Fbar.d(alpha), x, Scalar(1));
    for (int y = 0; y < static_cast<int>(C.size()); ++y) {
      AlgebraElement e = mv.at(x, y);
      if (!e.is_zero()) put(Fbar.act(R, alpha, e), y, parity_sign(Fbar.basis.degree(a)));
    }
  }
  for (auto& [k, M] : mats)
    if (k > X.min_degree()) X.set_d(k, std::move(M));
  if (certify) X.certify_d_squared();
  return X;
}

// ---------------------------------------------------------------------------
// Sign characters and the orientation system

/// w : π → {±1}, closed under the group law from declared values.
struct SignCharacter {
  std::string name;
  Group group;
  std::map<Group::Elem, int> values;

  int operator()(const Group::Elem& e) const {
    if (group.kind == Group::Kind::FreeAbelian) {
      int s = 1;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] % 2 != 0) s *= values.at(unit_vector(i));
      return s;
    }
    auto it = values.find(e);
    if (it == values.end()) fail(ErrorCode::InconsistentCharacter, "character " + name + " undefined on " + group.name(e));
    return it->second;
  }

  bool trivial() const {
    for (const auto& [e, v] : values)
      if (v != 1) return false;
    return true;
  }

  Group::Elem unit_vector(std::size_t i) const {
    Group::Elem e(group.names.size(), 0);
    e[i] = 1;
    return e;
  }
};

/// Extends declared values multiplicatively; InconsistentCharacter on a clash
/// or when the declared elements do not generate.
inline SignCharacter close_character(const Group& G, const std::map<Group::Elem, int>& declared, std::string name = "w") {
  SignCharacter w{std::move(name), G, {}};
  for (const auto& [e, v] : declared)
    if (v != 1 && v != -1) fail(ErrorCode::InconsistentCharacter, "value " + std::to_string(v) + " is not a sign");
  if (G.kind == Group::Kind::FreeAbelian) {
    for (std::size_t i = 0; i < G.names.size(); ++i) {
      auto it = declared.find(w.unit_vector(i));
      if (it == declared.end()) fail(ErrorCode::InconsistentCharacter, "no value for " + G.names[i]);
      w.values[w.unit_vector(i)] = it->second;
    }
    for (const auto& [e, v] : declared)
      if (w(e) != v) fail(ErrorCode::InconsistentCharacter, "value on " + G.name(e) + " contradicts the generators");
    return w;
  }
  w.values[G.identity()] = 1;
  for (const auto& [e, v] : declared) {
    auto it = w.values.find(e);
    if (it != w.values.end() && it->second != v) fail(ErrorCode::InconsistentCharacter, "identity must have value +1");
    w.values[e] = v;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<Group::Elem, int>> known(w.values.begin(), w.values.end());
    for (const auto& [a, va] : known)
      for (const auto& [b, vb] : known) {
        Group::Elem ab = G.mul(a, b);
        auto it = w.values.find(ab);
        if (it == w.values.end()) {
          w.values[ab] = va * vb;
          grew = true;
        } else if (it->second != va * vb) {
          fail(ErrorCode::InconsistentCharacter, "w(" + G.name(a) + ")·w(" + G.name(b) + ") != w(" + G.name(ab) + ")");
        }
      }
  }
  if (w.values.size() != G.order())
    fail(ErrorCode::InconsistentCharacter, "declared values do not determine " + w.name + " on every element");
  return w;
}

/// Rank-one module Z_w: group elements act by their sign.
inline DGModule orientation_system(const SignCharacter& w, const DGA& R) {
  DGModule M;
  M.name = "o";
  M.basis.gens = {{"o", 0}};
  for (int g : R.basis.in_degree(0)) {
    if (g == R.unit) continue;
    auto e = R.h0_of(R.mono(g));
    M.action[{0, R.basis.name(g)}] = e ? M.gen(R, 0, Scalar(w(*e))) : ModuleElement{};
  }
  for (std::size_t v = 0; v < R.nvars(); ++v) {
    int s = w(w.unit_vector(v));
    M.action[{0, R.vars[v]}] = M.gen(R, 0, Scalar(s));
    M.action[{0, R.vars[v] + "^-1"}] = M.gen(R, 0, Scalar(s));
  }
  return M;
}

/// Sign of a monomial under w; nullopt when the generator does not act
/// through a group element.
inline std::optional<int> monomial_sign(const SignCharacter& w, const DGA& R, const Monomial& m) {
  if (R.basis.degree(m.gen) != 0) return std::nullopt;
  auto e = R.h0_of(m);
  if (!e) return std::nullopt;
  return w(*e);
}

/// τ_w(g) = w(g)·g extended linearly.
inline AlgebraElement apply_character(const SignCharacter& w, const DGA& R, const AlgebraElement& a) {
  AlgebraElement r;
  for (const auto& [m, c] : a.terms) {
    auto s = monomial_sign(w, R, m);
    if (!s) fail(ErrorCode::ActionNotGroupFactored, "generator " + R.basis.name(m.gen) + " does not act through the group");
    r.add(m, c * Scalar(*s));
  }
  return r;
}

inline CocycleMatrix apply_character(const SignCharacter& w, const DGA& R, const CocycleMatrix& m) {
  if (w.trivial()) return m;
  CocycleMatrix out = m;
  for (auto& [k, v] : out.entries) v = apply_character(w, R, v);
  return out;
}

/// F ⊗ o: the action of every generator is multiplied by its sign.
inline DGModule twist_by_character(const DGModule& F, const SignCharacter& w, const DGA& R) {
  if (w.trivial()) return F;
  DGModule G = F;
  G.name = F.name + "⊗o";
  for (auto& [k, v] : G.action) {
    auto ai = R.basis.find(k.second);
    int s = 1;
    if (ai) {
      auto sg = monomial_sign(w, R, R.mono(*ai));
      if (!sg) fail(ErrorCode::ActionNotGroupFactored, "generator " + k.second + " does not act through the group");
      s = *sg;
    } else {
      std::string var = k.second.substr(0, k.second.find('^'));
      for (std::size_t i = 0; i < R.nvars(); ++i)
        if (R.vars[i] == var) s = w(w.unit_vector(i));
    }
    if (s < 0) v = v.scaled(Scalar(-1));
  }
  if (F.laurent_free)
    for (std::size_t i = 0; i < R.nvars(); ++i)
      if (w(w.unit_vector(i)) < 0) fail(ErrorCode::ActionNotGroupFactored, "Laurent free module twisted by a nontrivial sign");
  return G;
}

/// Same critical points with indices n − |x|: the basis of −f.
inline CriticalBasis reversed_basis(const CriticalBasis& C) {
  CriticalBasis out = C;
  for (auto& p : out.points) p.index = C.ambient_dim - p.index;
  return out;
}

// ---------------------------------------------------------------------------
// Poincaré duality map

struct DualityResult {
  std::shared_ptr<ChainComplex> homological;  // (−f, F, m^{−f})
  std::shared_ptr<ChainComplex> cochain;      // (f, F̄[⊗o], m∨), moved so PD preserves degree
  ChainMap pd;
  HomologyResult h_homological, h_cochain;
  bool iso = false;
};

/// PD(α⊗x) = α⊗x∨. PairingMismatch unless τ_w(m∨) = m^{−f} entrywise; the
/// identity is then certified as a chain map and its effect on homology checked.
inline DualityResult poincare_duality_map(const DGModule& F, const DGA& R, const CriticalBasis& C, const CocycleMatrix& m_neg,
                                          const CocycleMatrix& m_dual, const std::optional<SignCharacter>& w,
                                          const ScalarContext& scalars) {
  const int n = C.ambient_dim;
  CriticalBasis Cneg = reversed_basis(C);
  CocycleMatrix compared = w ? apply_character(*w, R, m_dual) : m_dual;
  const int np = static_cast<int>(C.size());
  for (int x = 0; x < np; ++x)
    for (int y = 0; y < np; ++y)
      if (!(compared.at(x, y) == m_neg.at(x, y)))
        fail(ErrorCode::PairingMismatch, "(" + C.name(x) + ", " + C.name(y) + "): cochain side gives " + R.to_string(compared.at(x, y)) +
                                             ", homological side " + R.to_string(m_neg.at(x, y)));

  DualityResult out;
  out.homological = std::make_shared<ChainComplex>(build_twisted_complex(F, R, Cneg, m_neg, scalars));
  DGModule Fbar = opposite_grading(w ? twist_by_character(F, *w, R) : F);
  out.cochain = std::make_shared<ChainComplex>(build_cochain_complex(Fbar, R, C, m_dual, scalars).shifted(n));

  const ChainComplex& X = *out.homological;
  const ChainComplex& Y = *out.cochain;
  out.pd = ChainMap{&X, &Y, {}};
  for (int k = X.min_degree(); k <= X.max_degree(); ++k) {
    if (X.rank(k) != Y.rank(k)) fail(ErrorCode::DegreeMismatch, "PD ranks differ in degree " + std::to_string(k));
    Matrix M(X.ctx, Y.rank(k), X.rank(k));
    const auto& xs = X.basis(k);
    const auto& ys = Y.basis(k);
    for (std::size_t j = 0; j < xs.size(); ++j)
      for (std::size_t i = 0; i < ys.size(); ++i)
        if (ys[i] == xs[j] + "∨") M.set(i, j, 1);
    out.pd.maps.emplace(k, std::move(M));
  }
  out.pd.certify();
  out.h_homological = homology(X);
  out.h_cochain = homology(Y);
  out.iso = induced_is_isomorphism(induced_on_homology(out.pd, out.h_homological, out.h_cochain), out.h_homological, out.h_cochain);
  return out;
}

/// Cohomology H^c read off a cochain complex stored at homological degree −c.
inline std::string describe_cohomology(const HomologyResult& H, int c) { return H.describe(-c); }

}  // namespace dgm
