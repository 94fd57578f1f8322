#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgmorse/twisted.hpp"

namespace dgm {

/// ∂ν_{x0,y1} = Σ_{z0} m⁰_{x0,z0} ν_{z0,y1} + Σ_{z1} (−1)^{|x0|−|z1|−1} ν_{x0,z1} m¹_{z1,y1}
inline Diagnostic check_continuation_cocycle(const DGA& R, const CriticalBasis& C0, const CriticalBasis& C1, const CocycleMatrix& m0,
                                             const CocycleMatrix& m1, const CocycleMatrix& nu) {
  Diagnostic diag;
  for (const auto& s : check_cocycle_degrees(R, C0, C1, nu).issues) diag.notes.push_back(s);
  const int n0 = static_cast<int>(C0.size()), n1 = static_cast<int>(C1.size());
  for (int x = 0; x < n0; ++x)
    for (int y = 0; y < n1; ++y) {
      if (C0.index(x) < C1.index(y)) continue;
      AlgebraElement rhs;
      for (int z = 0; z < n0; ++z) {
        AlgebraElement a = m0.at(x, z), b = nu.at(z, y);
        if (!a.is_zero() && !b.is_zero()) rhs.add(R.mul(a, b));
      }
      for (int z = 0; z < n1; ++z) {
        AlgebraElement a = nu.at(x, z), b = m1.at(z, y);
        if (!a.is_zero() && !b.is_zero()) rhs.add(R.mul(a, b), parity_sign(C0.index(x) - C1.index(z) - 1));
      }
      AlgebraElement res = R.d(nu.at(x, y)).minus(rhs);
      if (!res.is_zero()) diag.failures.push_back({C0.name(x), C1.name(y), R.to_string(res)});
    }
  return diag;
}

/// ∂h = ν¹ − ν⁰ + Σ_{z0} (−1)^{|x0|−|z0|} m⁰ h + Σ_{z1} (−1)^{|x0|−|z1|} h m¹
inline Diagnostic check_homotopy_cocycle(const DGA& R, const CriticalBasis& C0, const CriticalBasis& C1, const CocycleMatrix& m0,
                                         const CocycleMatrix& m1, const CocycleMatrix& nu0, const CocycleMatrix& nu1,
                                         const CocycleMatrix& h) {
  Diagnostic diag;
  for (const auto& s : check_cocycle_degrees(R, C0, C1, h).issues) diag.notes.push_back(s);
  const int n0 = static_cast<int>(C0.size()), n1 = static_cast<int>(C1.size());
  for (int x = 0; x < n0; ++x)
    for (int y = 0; y < n1; ++y) {
      if (C0.index(x) + 1 < C1.index(y)) continue;
      AlgebraElement rhs = nu1.at(x, y).minus(nu0.at(x, y));
      for (int z = 0; z < n0; ++z) {
        AlgebraElement a = m0.at(x, z), b = h.at(z, y);
        if (!a.is_zero() && !b.is_zero()) rhs.add(R.mul(a, b), parity_sign(C0.index(x) - C0.index(z)));
      }
      for (int z = 0; z < n1; ++z) {
        AlgebraElement a = h.at(x, z), b = m1.at(z, y);
        if (!a.is_zero() && !b.is_zero()) rhs.add(R.mul(a, b), parity_sign(C0.index(x) - C1.index(z)));
      }
      AlgebraElement res = R.d(h.at(x, y)).minus(rhs);
      if (!res.is_zero()) diag.failures.push_back({C0.name(x), C1.name(y), R.to_string(res)});
    }
  return diag;
}

/// Positions of α⊗x inside the complexes built by build_twisted_complex.
inline std::map<std::pair<int, int>, std::pair<int, std::size_t>> tensor_positions(const DGModule& F, const CriticalBasis& C,
                                                                                    int sign_of_index = 1) {
  ChainComplex scratch;
  return tensor_basis(scratch, F, C, sign_of_index).pos;
}

namespace detail {
/// Σ_y sign(α) α·c_{x,y} ⊗ y as matrices of the given degree offset.
inline std::map<int, Matrix> cocycle_matrices(const DGModule& F, const DGA& R, const CriticalBasis& C0, const CriticalBasis& C1,
                                              const CocycleMatrix& c, const ChainComplex& X0, const ChainComplex& X1, int offset,
                                              bool alpha_sign) {
  auto P0 = tensor_positions(F, C0), P1 = tensor_positions(F, C1);
  std::map<int, Matrix> out;
  for (int k = X0.min_degree(); k <= X0.max_degree(); ++k) out.emplace(k, Matrix(X1.ctx, X1.rank(k + offset), X0.rank(k)));
  for (const auto& [key, p] : P0) {
    auto [a, x] = key;
    auto [k, col] = p;
    ModuleElement alpha = F.gen(R, a);
    Scalar s = alpha_sign ? parity_sign(F.basis.degree(a)) : Scalar(1);
    for (int y = 0; y < static_cast<int>(C1.size()); ++y) {
      AlgebraElement e = c.at(x, y);
      if (e.is_zero()) continue;
      for (const auto& [mono, coef] : F.act(R, alpha, e).terms) {
        auto it = P1.find({mono.gen, y});
        if (it == P1.end() || it->second.first != k + offset)
          fail(ErrorCode::DegreeMismatch, c.name + " maps " + F.basis.name(a) + "⊗" + C0.name(x) + " out of degree " +
                                              std::to_string(k + offset));
        out.at(k).add_to(it->second.second, col, coefficient(X1.ctx, mono, coef * s));
      }
    }
  }
  return out;
}
}  // namespace detail

/// Ψ(α⊗x0) = Σ α·ν_{x0,y1} ⊗ y1, certified to commute with the differentials.
inline ChainMap induce_chain_map(const CocycleMatrix& nu, const DGModule& F, const DGA& R, const CriticalBasis& C0, const CriticalBasis& C1,
                                 const ChainComplex& X0, const ChainComplex& X1) {
  ChainMap f{&X0, &X1, detail::cocycle_matrices(F, R, C0, C1, nu, X0, X1, 0, false)};
  f.certify();
  return f;
}

struct ChainHomotopy {
  const ChainMap* f0 = nullptr;
  const ChainMap* f1 = nullptr;
  std::map<int, Matrix> maps;  // maps[k]: X0_k -> X1_{k+1}
};

/// h(α⊗x0) = (−1)^{|α|} Σ α·h_{x0,y1} ⊗ y1 with Ψ1 − Ψ0 = ∂h + h∂ certified.
inline ChainHomotopy induce_homotopy(const CocycleMatrix& h, const DGModule& F, const DGA& R, const CriticalBasis& C0,
                                     const CriticalBasis& C1, const ChainMap& f0, const ChainMap& f1) {
  const ChainComplex& X0 = *f0.source;
  const ChainComplex& X1 = *f0.target;
  ChainHomotopy H{&f0, &f1, detail::cocycle_matrices(F, R, C0, C1, h, X0, X1, 1, true)};
  auto at = [&](int k) {
    auto it = H.maps.find(k);
    return it != H.maps.end() ? it->second : Matrix(X1.ctx, X1.rank(k + 1), X0.rank(k));
  };
  for (int k = X0.min_degree(); k <= X0.max_degree(); ++k) {
    Matrix lhs = f1.at(k) - f0.at(k);
    Matrix rhs = X1.d(k + 1) * at(k) + at(k - 1) * X0.d(k);
    Matrix res = lhs - rhs;
    for (std::size_t j = 0; j < res.cols(); ++j)
      for (std::size_t i = 0; i < res.rows(); ++i)
        if (!res(i, j).is_zero())
          fail(ErrorCode::NotAHomotopy, "degree " + std::to_string(k) + ", column " + X0.basis(k)[j] + ": residual " +
                                            res(i, j).to_string(X0.ctx.var) + " on " + X1.basis(k)[i]);
  }
  return H;
}

/// m'_{x,y} = Φ(m_{x,y}), with the MC relation re-verified in the target.
inline CocycleMatrix pushforward_cocycle(const DGAMorphism& phi, const CocycleMatrix& m, const CriticalBasis& C) {
  CocycleMatrix out;
  out.name = m.name + "_pushed";
  out.kind = m.kind;
  for (const auto& [k, v] : m.entries) out.set(k.first, k.second, phi.apply(v));
  if (m.kind == CocycleKind::Twisting) {
    Diagnostic d = check_maurer_cartan(C, *phi.target, out);
    if (!d.ok()) fail(ErrorCode::NotAChainMap, "pushed-forward cocycle fails the MC relation at (" + d.failures.at(0).row + ", " + d.failures.at(0).col + ")");
  }
  return out;
}

/// Φ^*F: the target-algebra module seen over the source algebra.
inline DGModule pullback_module(const DGModule& F, const DGAMorphism& phi) {
  if (F.laurent_free) fail(ErrorCode::UnsupportedRing, "pullback of a Laurent free module");
  const DGA& S = *phi.source;
  const DGA& T = *phi.target;
  DGModule G;
  G.name = F.name + "_pulled";
  G.basis = F.basis;
  G.sense = F.sense;
  G.diff = F.diff;
  for (int b = 0; b < static_cast<int>(F.basis.size()); ++b) {
    ModuleElement beta = F.gen(T, b);
    auto conv = [&](const ModuleElement& e) {
      ModuleElement r;
      for (const auto& [m, c] : e.terms) r.add(G.mono(S, m.gen), c);
      return r;
    };
    for (int g = 0; g < static_cast<int>(S.basis.size()); ++g) {
      if (g == S.unit) continue;
      if (!F.basis.has_degree(F.act_degree(F.basis.degree(b), S.basis.degree(g)))) continue;
      G.action[{b, S.basis.name(g)}] = conv(F.act(T, beta, phi.apply(S.gen(g))));
    }
    for (std::size_t v = 0; v < S.nvars(); ++v) {
      G.action[{b, S.vars[v]}] = conv(F.act(T, beta, phi.apply(S.var_power(v, 1))));
      G.action[{b, S.vars[v] + "^-1"}] = conv(F.act(T, beta, phi.apply(S.var_power(v, -1))));
    }
  }
  return G;
}

/// Degree-0 map of modules given on generators.
struct ModuleMap {
  std::string name;
  const DGModule* source = nullptr;
  const DGModule* target = nullptr;
  std::map<int, ModuleElement> images;

  ModuleElement apply(const DGA& R, const ModuleElement& x) const {
    ModuleElement r;
    for (const auto& [m, c] : x.terms) {
      auto it = images.find(m.gen);
      if (it == images.end()) continue;
      r.add(it->second.shifted(m.exps), c);
    }
    (void)R;
    return r;
  }

  void validate(const DGA& R) const {
    for (int b = 0; b < static_cast<int>(source->basis.size()); ++b) {
      ModuleElement beta = source->gen(R, b);
      ModuleElement img = apply(R, beta);
      auto d = target->degree(img);
      if (d && *d != source->basis.degree(b)) fail(ErrorCode::NotModuleMorphism, name + " changes the degree of " + source->basis.name(b));
      if (!(target->d(img) == apply(R, source->d(beta))))
        fail(ErrorCode::NotModuleMorphism, name + " does not commute with d on " + source->basis.name(b));
      for (int a = 0; a < static_cast<int>(R.basis.size()); ++a)
        if (!(apply(R, source->act(R, beta, R.gen(a))) == target->act(R, img, R.gen(a))))
          fail(ErrorCode::NotModuleMorphism, name + " does not commute with the action of " + R.basis.name(a) + " on " +
                                                 source->basis.name(b));
      for (std::size_t v = 0; v < R.nvars(); ++v)
        if (!(apply(R, source->act(R, beta, R.var_power(v, 1))) == target->act(R, img, R.var_power(v, 1))))
          fail(ErrorCode::NotModuleMorphism, name + " does not commute with " + R.vars[v]);
    }
  }
};

/// Γ̃(α⊗x) = Γ(α)⊗x
inline ChainMap module_morphism_chain_map(const ModuleMap& g, const DGA& R, const CriticalBasis& C, const ChainComplex& X0,
                                          const ChainComplex& X1) {
  g.validate(R);
  auto P0 = tensor_positions(*g.source, C), P1 = tensor_positions(*g.target, C);
  ChainMap f{&X0, &X1, {}};
  for (int k = X0.min_degree(); k <= X0.max_degree(); ++k) f.maps.emplace(k, Matrix(X1.ctx, X1.rank(k), X0.rank(k)));
  for (const auto& [key, p] : P0) {
    auto [a, x] = key;
    for (const auto& [mono, c] : g.apply(R, g.source->gen(R, a)).terms) {
      auto q = P1.at({mono.gen, x});
      f.maps.at(p.first).add_to(q.second, p.second, coefficient(X1.ctx, mono, c));
    }
  }
  f.certify();
  return f;
}

struct QuasiIsoVerdict {
  bool quasi_iso = false;
  HomologyResult cone_homology;
};

inline QuasiIsoVerdict is_quasi_iso(const ChainMap& f) {
  ChainComplex cone = mapping_cone(f);
  cone.certify_d_squared();
  QuasiIsoVerdict v;
  v.cone_homology = homology(cone);
  v.quasi_iso = true;
  for (const auto& [k, g] : v.cone_homology.groups)
    if (!g.is_zero()) v.quasi_iso = false;
  return v;
}

/// Regrades a complex for shriek-type maps: every degree moves by m − n.
inline ChainComplex shriek_reindex(const ChainComplex& X, int m_src_dim, int n_tgt_dim) { return X.shifted(m_src_dim - n_tgt_dim); }

/// Per-degree matrices of f_* on the chosen homology generators.
inline std::map<int, Matrix> induced_on_homology(const ChainMap& f, const HomologyResult& Hs, const HomologyResult& Ht) {
  std::map<int, Matrix> out;
  for (const auto& [k, g] : Hs.groups) out.emplace(k, induced_matrix(g, Ht.at(k), f.at(k), Ht.ctx));
  return out;
}

inline bool induced_is_isomorphism(const std::map<int, Matrix>& maps, const HomologyResult& Hs, const HomologyResult& Ht) {
  int lo = std::min(Hs.groups.empty() ? 0 : Hs.groups.begin()->first, Ht.groups.empty() ? 0 : Ht.groups.begin()->first);
  int hi = std::max(Hs.groups.empty() ? 0 : Hs.groups.rbegin()->first, Ht.groups.empty() ? 0 : Ht.groups.rbegin()->first);
  for (int k = lo; k <= hi; ++k) {
    const auto& s = Hs.at(k);
    const auto& t = Ht.at(k);
    auto it = maps.find(k);
    Matrix M = it != maps.end() ? it->second : Matrix(Ht.ctx, t.generators(), s.generators());
    if (!is_module_isomorphism(M, s.orders, t.orders)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lifted map of a continuation cocycle over H_0(R)

struct GroupRingMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<GroupRingElement> data;
  GroupRingElement& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const GroupRingElement& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Per critical index, the square matrix of projected ν entries between points of equal index.
inline std::map<int, GroupRingMatrix> lifted_map(const CocycleMatrix& nu, const DGA& R, const CriticalBasis& C0, const CriticalBasis& C1) {
  std::map<int, GroupRingMatrix> out;
  std::map<int, std::vector<int>> src, tgt;
  for (int x = 0; x < static_cast<int>(C0.size()); ++x) src[C0.index(x)].push_back(x);
  for (int y = 0; y < static_cast<int>(C1.size()); ++y) tgt[C1.index(y)].push_back(y);
  for (const auto& [k, xs] : src) {
    const auto& ys = tgt[k];
    GroupRingMatrix M{ys.size(), xs.size(), std::vector<GroupRingElement>(ys.size() * xs.size())};
    for (std::size_t j = 0; j < xs.size(); ++j)
      for (std::size_t i = 0; i < ys.size(); ++i) M.at(i, j) = R.project(nu.at(xs[j], ys[i]));
    out[k] = std::move(M);
  }
  return out;
}

/// Determinant over a commutative group ring by cofactor expansion.
inline GroupRingElement group_ring_det(const GroupRingMatrix& M, const Group& G) {
  const std::size_t n = M.rows;
  if (n == 0) return GroupRingElement::unit(G, Scalar(1));
  if (n == 1) return M.at(0, 0);
  GroupRingElement total;
  for (std::size_t c = 0; c < n; ++c) {
    if (M.at(0, c).is_zero()) continue;
    GroupRingMatrix minor{n - 1, n - 1, {}};
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) minor.data.push_back(M.at(i, j));
    GroupRingElement term = M.at(0, c).times(group_ring_det(minor, G), G);
    total = total.plus(c % 2 == 0 ? term : term.negated());
  }
  return total;
}

/// True when every block is square with determinant ±g (a trivial unit of A[G]).
inline bool lifted_map_invertible(const std::map<int, GroupRingMatrix>& blocks, const Group& G) {
  if (!G.is_abelian()) fail(ErrorCode::UnsupportedRing, "invertibility test needs a commutative group ring");
  for (const auto& [k, M] : blocks) {
    if (M.rows != M.cols) return false;
    if (!group_ring_det(M, G).is_trivial_unit()) return false;
  }
  return true;
}

}  // namespace dgm
