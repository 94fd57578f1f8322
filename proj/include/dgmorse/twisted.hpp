#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "dgmorse/critical.hpp"
#include "dgmorse/homology.hpp"
#include "dgmorse/module.hpp"

namespace dgm {

struct PairFailure {
  std::string row, col, residual;
};

/// Empty iff the checked equation holds for every pair.
struct Diagnostic {
  std::vector<PairFailure> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty() && notes.empty(); }
  bool names(const std::string& row, const std::string& col) const {
    for (const auto& f : failures)
      if (f.row == row && f.col == col) return true;
    return false;
  }
};

/// ∂m_{x,y} = Σ_z (−1)^{|x|−|z|} m_{x,z} m_{z,y}
inline Diagnostic check_maurer_cartan(const CriticalBasis& C, const DGA& R, const CocycleMatrix& m) {
  Diagnostic diag;
  auto deg = check_cocycle_degrees(R, C, C, m);
  for (const auto& s : deg.issues) diag.notes.push_back(s);
  const int n = static_cast<int>(C.size());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (C.index(x) <= C.index(y)) continue;
      AlgebraElement rhs;
      for (int z = 0; z < n; ++z) {
        if (!(C.index(x) > C.index(z) && C.index(z) > C.index(y))) continue;
        AlgebraElement a = m.at(x, z), b = m.at(z, y);
        if (a.is_zero() || b.is_zero()) continue;
        rhs.add(R.mul(a, b), parity_sign(C.index(x) - C.index(z)));
      }
      AlgebraElement res = R.d(m.at(x, y)).minus(rhs);
      if (!res.is_zero()) diag.failures.push_back({C.name(x), C.name(y), R.to_string(res)});
    }
  return diag;
}

/// Scalar context of the complex built from F with the given ground scalars.
inline ScalarContext complex_context(const DGModule& F, const DGA& R, const ScalarContext& scalars) {
  if (!F.laurent_free) return scalars;
  if (R.nvars() != 1) {
    Group G = Group::free_abelian(R.vars);
    fail(ErrorCode::UnsupportedRing, "unsupported ring " + G.ring_name(scalars.kind == ScalarKind::Z ? "ℤ" : scalars.name()));
  }
  if (!scalars.is_field()) fail(ErrorCode::UnsupportedRing, "unsupported ring ℤ[ℤ]: Laurent coefficients need a field");
  return ScalarContext::laurent_over(scalars, R.vars[0]);
}

/// Coefficient of a module monomial in the complex's scalars.
inline Scalar coefficient(const ScalarContext& ctx, const Monomial& m, const Scalar& c) {
  long e = 0;
  for (std::size_t i = 0; i < m.exps.size(); ++i) {
    if (m.exps[i] == 0) continue;
    if (!ctx.is_laurent() || i > 0) fail(ErrorCode::UnsupportedRing, "variable exponent outside a Laurent context");
    e = m.exps[i];
  }
  if (ctx.is_laurent()) return laurent_monomial(ctx, c, e);
  return c.in(ctx);
}

/// Basis bookkeeping shared by the twisted and cochain builders.
struct TensorIndex {
  std::map<std::pair<int, int>, std::pair<int, std::size_t>> pos;  // (alpha, x) -> (degree, position)
};

inline TensorIndex tensor_basis(ChainComplex& X, const DGModule& F, const CriticalBasis& C, int sign_of_index = 1) {
  TensorIndex T;
  for (int x = 0; x < static_cast<int>(C.size()); ++x)
    for (int a = 0; a < static_cast<int>(F.basis.size()); ++a) {
      int k = F.basis.degree(a) + sign_of_index * C.index(x);
      T.pos[{a, x}] = {k, X.rank(k)};
      X.add_generator(k, F.basis.name(a) + "⊗" + C.name(x), C.index(x));
    }
  return T;
}

/// ∂(α⊗x) = ∂α⊗x + (−1)^{|α|} Σ_y α·m_{x,y} ⊗ y
inline ChainComplex build_twisted_complex(const DGModule& F, const DGA& R, const CriticalBasis& C, const CocycleMatrix& m,
                                          const ScalarContext& scalars, bool certify = true) {
  if (F.sense != Sense::Homological) fail(ErrorCode::SchemaViolation, "module " + F.name + " is cohomological");
  ChainComplex X;
  X.ctx = complex_context(F, R, scalars);
  TensorIndex T = tensor_basis(X, F, C);
  std::map<int, Matrix> mats;
  for (int k = X.min_degree(); k <= X.max_degree(); ++k) mats.emplace(k, Matrix(X.ctx, X.rank(k - 1), X.rank(k)));

  const int n = static_cast<int>(C.size());
  for (const auto& [key, p] : T.pos) {
    auto [a, x] = key;
    auto [k, col] = p;
    Matrix& M = mats.at(k);
    auto put = [&](const ModuleElement& e, int y, const Scalar& sign) {
      for (const auto& [mono, c] : e.terms) {
        auto it = T.pos.find({mono.gen, y});
        if (it == T.pos.end() || it->second.first != k - 1)
          fail(ErrorCode::DegreeMismatch, "twisted differential leaves degree " + std::to_string(k - 1));
        M.add_to(it->second.second, col, coefficient(X.ctx, mono, c * sign));
      }
    };
    ModuleElement alpha = F.gen(R, a);
    put(F.d(alpha), x, Scalar(1));
    for (int y = 0; y < n; ++y) {
      AlgebraElement mxy = m.at(x, y);
      if (mxy.is_zero()) continue;
      put(F.act(R, alpha, mxy), y, parity_sign(F.basis.degree(a)));
    }
  }
  for (auto& [k, M] : mats)
    if (k > X.min_degree()) X.set_d(k, std::move(M));
  if (certify) X.certify_d_squared();
  return X;
}

// ---------------------------------------------------------------------------
// Lifted complex over H_0(R) = A[G]

struct GroupRingComplex {
  Group group;
  ScalarContext ground;
  CriticalBasis C;
  std::map<std::pair<int, int>, GroupRingElement> delta;  // (x, y), |x| = |y| + 1

  GroupRingElement at(int x, int y) const {
    auto it = delta.find({x, y});
    return it == delta.end() ? GroupRingElement{} : it->second;
  }

  std::string render() const {
    std::string out;
    for (const auto& [k, v] : delta)
      out += "  δ(" + C.name(k.first) + ") ∋ (" + v.to_string(group) + ")·" + C.name(k.second) + "\n";
    return out;
  }
};

/// δ(x) = Σ_{|y|=|x|−1} m̂_{x,y} y with δ² = 0 certified.
inline GroupRingComplex lifted_complex(const CriticalBasis& C, const CocycleMatrix& m, const DGA& R) {
  GroupRingComplex L;
  L.group = R.group();
  L.ground = R.ground;
  L.C = C;
  const int n = static_cast<int>(C.size());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (C.index(x) != C.index(y) + 1) continue;
      GroupRingElement g = R.project(m.at(x, y));
      if (!g.is_zero()) L.delta[{x, y}] = g;
    }
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) {
      if (C.index(x) != C.index(z) + 2) continue;
      GroupRingElement s;
      for (int y = 0; y < n; ++y)
        if (C.index(y) == C.index(x) - 1) s = s.plus(L.at(x, y).times(L.at(y, z), L.group));
      if (!s.is_zero())
        fail(ErrorCode::DSquaredNonzero, "lifted δ∘δ(" + C.name(x) + ") has coefficient " + s.to_string(L.group) + " on " + C.name(z));
    }
  return L;
}

/// M ⊗_{A[G]} L for a right module M: μ⊗x ↦ Σ_y Σ_g c_g (μ·g) ⊗ y.
inline ChainComplex local_coefficient_complex(const DGModule& M, const DGA& R, const GroupRingComplex& L, const ScalarContext& scalars) {
  // finite-rank M is fine over any group; only the ring itself is refused
  if (M.laurent_free && L.group.kind == Group::Kind::FreeAbelian && L.group.rank() >= 2)
    fail(ErrorCode::UnsupportedRing, "unsupported ring " + L.group.ring_name());
  ChainComplex X;
  X.ctx = complex_context(M, R, scalars);
  if (M.laurent_free && !X.ctx.is_laurent()) fail(ErrorCode::UnsupportedRing, "module of infinite rank over " + scalars.name());
  TensorIndex T = tensor_basis(X, M, L.C);
  std::map<int, Matrix> mats;
  for (int k = X.min_degree(); k <= X.max_degree(); ++k) mats.emplace(k, Matrix(X.ctx, X.rank(k - 1), X.rank(k)));
  for (const auto& [key, p] : T.pos) {
    auto [a, x] = key;
    auto [k, col] = p;
    Matrix& Mk = mats.at(k);
    ModuleElement mu = M.gen(R, a);
    auto put = [&](const ModuleElement& e, int y, const Scalar& s) {
      for (const auto& [mono, c] : e.terms) {
        auto it = T.pos.find({mono.gen, y});
        Mk.add_to(it->second.second, col, coefficient(X.ctx, mono, c * s));
      }
    };
    put(M.d(mu), x, Scalar(1));
    for (const auto& [xy, g] : L.delta) {
      if (xy.first != x) continue;
      for (const auto& [e, c] : g.terms) put(M.act(R, mu, R.from_group(e)), xy.second, c * parity_sign(M.basis.degree(a)));
    }
  }
  for (auto& [k, Mk] : mats)
    if (k > X.min_degree()) X.set_d(k, std::move(Mk));
  X.certify_d_squared();
  return X;
}

inline HomologyResult local_coefficient_homology(const DGModule& M, const DGA& R, const GroupRingComplex& L, const ScalarContext& scalars) {
  return homology(local_coefficient_complex(M, R, L, scalars));
}

/// The group ring itself as a right module (finite group: ℤ-basis of group
/// elements; free abelian: Laurent free of rank one).
inline DGModule group_ring_module(const DGA& R) {
  DGModule M;
  M.name = "group-ring";
  if (R.group_kind == DGA::GroupKind::Laurent) {
    M.basis.gens = {{"1", 0}};
    M.laurent_free = true;
    return M;
  }
  Group G = R.group();
  for (std::size_t i = 0; i < G.order(); ++i) M.basis.gens.push_back({"[" + G.names[i] + "]", 0});
  for (std::size_t i = 0; i < G.order(); ++i)
    for (std::size_t j = 1; j < G.order(); ++j)
      M.action[{static_cast<int>(i), R.basis.name(R.group_gens[j])}] =
          M.gen(R, G.table[i][j]);
  for (int g : R.basis.in_degree(0)) {
    bool in_group = false;
    for (int h : R.group_gens) in_group |= (h == g);
    if (in_group) continue;
    for (std::size_t i = 0; i < G.order(); ++i) {
      auto img = R.h0_of(R.mono(g));
      M.action[{static_cast<int>(i), R.basis.name(g)}] = img ? M.gen(R, G.table[i][(*img)[0]]) : ModuleElement{};
    }
  }
  return M;
}

/// Homology of the lifted complex itself: finite groups by restriction of
/// scalars, Z over a field as a Laurent complex; everything else is refused.
inline HomologyResult lifted_homology(const GroupRingComplex& L, const DGA& R, const ScalarContext& scalars) {
  if (L.group.kind == Group::Kind::FreeAbelian) {
    if (L.group.rank() >= 2) fail(ErrorCode::UnsupportedRing, "unsupported ring " + L.group.ring_name());
    if (!scalars.is_field()) fail(ErrorCode::UnsupportedRing, "unsupported ring ℤ[ℤ] (integer Laurent polynomials)");
  }
  return local_coefficient_homology(group_ring_module(R), R, L, scalars);
}

// ---------------------------------------------------------------------------
// Degree-zero formula H_0(F) ⊗_{H_0(R)} H_0(C̃)

struct DegreeZeroResult {
  long free_rank = 0;
  std::vector<Scalar> torsion;
  Diagnostic diagnostic;
  ScalarContext ctx;
};

inline DegreeZeroResult degree_zero_formula(const DGModule& F, const DGA& R, const CriticalBasis& C, const CocycleMatrix& m,
                                            const ScalarContext& scalars) {
  for (const auto& g : F.basis.gens)
    if (g.degree < 0) fail(ErrorCode::SchemaViolation, "degree-zero formula needs a module in nonnegative degrees");
  GroupRingComplex L = lifted_complex(C, m, R);
  DegreeZeroResult out;
  out.ctx = complex_context(F, R, scalars);
  std::vector<int> f0 = F.basis.in_degree(0), f1 = F.basis.in_degree(1);
  std::vector<int> c0, c1;
  for (int x = 0; x < static_cast<int>(C.size()); ++x) {
    if (C.index(x) == 0) c0.push_back(x);
    if (C.index(x) == 1) c1.push_back(x);
  }
  std::map<std::pair<int, int>, std::size_t> row;
  for (int x : c0)
    for (int a : f0) row[{a, x}] = row.size();
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> rels;
  auto relation = [&](const ModuleElement& e, int x) {
    std::vector<std::pair<std::size_t, Scalar>> r;
    for (const auto& [mono, c] : e.terms) r.emplace_back(row.at({mono.gen, x}), coefficient(out.ctx, mono, c));
    rels.push_back(std::move(r));
  };
  // H_0(F) relations, tensored with each index-0 point
  for (int b : f1)
    for (int x : c0) relation(F.d(F.gen(R, b)), x);
  // image of δ_1: α ⊗ δ(y)
  for (int y : c1)
    for (int a : f0) {
      ModuleElement alpha = F.gen(R, a);
      std::map<int, ModuleElement> parts;
      for (const auto& [xy, g] : L.delta) {
        if (xy.first != y) continue;
        for (const auto& [e, c] : g.terms) parts[xy.second].add(F.act(R, alpha, R.from_group(e)), c);
      }
      std::vector<std::pair<std::size_t, Scalar>> r;
      for (const auto& [x, e] : parts)
        for (const auto& [mono, c] : e.terms) r.emplace_back(row.at({mono.gen, x}), coefficient(out.ctx, mono, c));
      rels.push_back(std::move(r));
    }
  Matrix P(out.ctx, row.size(), rels.size());
  for (std::size_t j = 0; j < rels.size(); ++j)
    for (const auto& [i, c] : rels[j]) P.add_to(i, j, c);
  SmithForm S = smith_normal_form(P);
  out.free_rank = static_cast<long>(row.size() - S.rank);
  for (std::size_t i = 0; i < S.rank; ++i)
    if (!is_unit(S.S(i, i))) out.torsion.push_back(S.S(i, i));

  HomologyResult H = homology(build_twisted_complex(F, R, C, m, scalars));
  const auto& h0 = H.at(0);
  bool same = h0.free_rank == out.free_rank && h0.torsion.size() == out.torsion.size();
  for (std::size_t i = 0; same && i < h0.torsion.size(); ++i) same = h0.torsion[i] == out.torsion[i];
  if (!same) out.diagnostic.notes.push_back("degree-zero formula gives rank " + std::to_string(out.free_rank) + " with " +
                                            std::to_string(out.torsion.size()) + " torsion factors, homology gives " +
                                            H.describe(0));
  return out;
}

}  // namespace dgm
