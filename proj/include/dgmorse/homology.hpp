#pragma once

#include <cstdlib>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "dgmorse/complex.hpp"
#include "dgmorse/smith.hpp"

namespace dgm {

/// One homology group ⊕ R/(d_i) ⊕ R^free. Generators come torsion first
/// (orders[i] = d_i), then free (orders[i] = 0). reps are cycles in the
/// complex's basis; witnesses are functionals with witness_i(rep_j) = δ_ij
/// and witness_i(boundaries) ≡ 0 mod orders[i].
struct HomologyGroup {
  int degree = 0;
  long free_rank = 0;
  std::vector<Scalar> torsion;
  std::vector<Scalar> orders;
  Matrix reps;       // rank(C_k) x #generators
  Matrix witnesses;  // #generators x rank(C_k)

  std::size_t generators() const { return orders.size(); }
  bool is_zero() const { return orders.empty(); }

  /// Coordinates of a cycle in terms of the generators (torsion coordinates reduced).
  std::vector<Scalar> coordinates(const Matrix& cycle) const {
    Matrix v = witnesses * cycle;
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < orders.size(); ++i)
      out.push_back(orders[i].is_zero() ? v(i, 0) : divmod(v(i, 0), orders[i]).second);
    return out;
  }
};

struct HomologyResult {
  ScalarContext ctx;
  std::map<int, HomologyGroup> groups;

  const HomologyGroup& at(int k) const {
    static HomologyGroup empty;
    auto it = groups.find(k);
    return it == groups.end() ? empty : it->second;
  }

  /// "Z ⊕ Z/2" style description of one degree.
  std::string describe(int k) const {
    const auto& g = at(k);
    std::string ring = ctx.name();
    std::vector<std::string> parts;
    if (g.free_rank == 1)
      parts.push_back(ring);
    else if (g.free_rank > 1)
      parts.push_back(ring + "^" + std::to_string(g.free_rank));
    for (const auto& t : g.torsion) {
      if (ctx.kind == ScalarKind::Z)
        parts.push_back("Z/" + t.to_string());
      else
        parts.push_back(ring + "/(" + t.to_string(ctx.var) + ")");
    }
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += " ⊕ " + parts[i];
    return out;
  }

  /// Dimension over the coefficient field of a Laurent ring (free part must vanish);
  /// over a field, the plain dimension.
  long ground_dimension(int k) const {
    const auto& g = at(k);
    if (ctx.is_laurent()) {
      if (g.free_rank > 0) return -1;  // infinite
      long dim = 0;
      for (const auto& t : g.torsion) dim += euclid_norm(t).get_si() - 1;
      return dim;
    }
    return g.free_rank;
  }
};

inline HomologyGroup homology_in_degree(const ChainComplex& C, int k) {
  HomologyGroup H;
  H.degree = k;
  const auto& ctx = C.ctx;
  const std::size_t n = C.rank(k);
  Matrix Dk = C.d(k), Dk1 = C.d(k + 1);

  SmithForm A = smith_normal_form(Dk);
  const std::size_t z = n - A.rank;
  std::vector<std::size_t> kcols, krows;
  for (std::size_t j = A.rank; j < n; ++j) {
    kcols.push_back(j);
    krows.push_back(j);
  }
  Matrix K = A.V.select_columns(kcols);                    // cycles
  Matrix Vinv_tail = A.V_inv.transpose().select_columns(krows).transpose();  // last z rows of V^-1
  Matrix Bm = Vinv_tail * Dk1;                             // boundaries in cycle coordinates

  SmithForm Bs = smith_normal_form(Bm);
  Matrix G = K * Bs.U_inv;       // generator candidates
  Matrix W = Bs.U * Vinv_tail;   // functionals

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < z; ++i) {
    if (i < Bs.rank) {
      Scalar d = Bs.S(i, i);
      if (is_unit(d)) continue;
      H.torsion.push_back(d);
      H.orders.push_back(d);
    } else {
      ++H.free_rank;
      H.orders.push_back(make_scalar(ctx, 0));
    }
    keep.push_back(i);
  }
  H.reps = G.select_columns(keep);
  H.witnesses = W.transpose().select_columns(keep).transpose();

  // certificate: reps are cycles, witnesses dual to reps, boundaries vanish mod orders
  if (!(Dk * H.reps).is_zero()) fail(ErrorCode::DSquaredNonzero, "homology representative is not a cycle in degree " + std::to_string(k));
  Matrix dual = H.witnesses * H.reps;
  Matrix onB = H.witnesses * Dk1;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (dual(i, j) != make_scalar(ctx, i == j ? 1 : 0))
        fail(ErrorCode::DSquaredNonzero, "homology witness not dual to representatives in degree " + std::to_string(k));
    for (std::size_t j = 0; j < onB.cols(); ++j)
      if (!divides(H.orders[i], onB(i, j)))
        fail(ErrorCode::DSquaredNonzero, "homology witness does not kill a boundary in degree " + std::to_string(k));
  }
  return H;
}

/// DGMORSE_WORKERS caps concurrent per-degree work; unset or < 2 runs sequentially.
inline int worker_cap() {
  const char* s = std::getenv("DGMORSE_WORKERS");
  if (!s) return 1;
  int n = std::atoi(s);
  return n > 1 ? n : 1;
}

inline HomologyResult homology(const ChainComplex& C) {
  HomologyResult R;
  R.ctx = C.ctx;
  const int cap = worker_cap();
  if (cap == 1) {
    for (int k = C.min_degree(); k <= C.max_degree(); ++k) R.groups[k] = homology_in_degree(C, k);
    return R;
  }
  for (int lo = C.min_degree(); lo <= C.max_degree(); lo += cap) {
    std::vector<std::pair<int, std::future<HomologyGroup>>> batch;
    for (int k = lo; k < lo + cap && k <= C.max_degree(); ++k)
      batch.emplace_back(k, std::async(std::launch::async, [&C, k] { return homology_in_degree(C, k); }));
    for (auto& [k, f] : batch) R.groups[k] = f.get();
  }
  return R;
}

/// Matrix of an induced map on one homology degree: column i holds the
/// coordinates of f(rep_i) in the target generators.
inline Matrix induced_matrix(const HomologyGroup& src, const HomologyGroup& tgt, const Matrix& fk, const ScalarContext& ctx) {
  Matrix M(ctx, tgt.generators(), src.generators());
  if (src.generators() == 0 || tgt.generators() == 0) return M;
  Matrix images = fk * src.reps;
  for (std::size_t i = 0; i < src.generators(); ++i) {
    auto c = tgt.coordinates(images.column(i));
    for (std::size_t j = 0; j < c.size(); ++j) M.set(j, i, c[j]);
  }
  return M;
}

/// Decides whether M : ⊕R/(a_i) -> ⊕R/(b_j) (orders 0 for free summands) is
/// an isomorphism, from presentations: surjective iff [M | diag(b)] generates
/// everything, injective iff every v with Mv ∈ im diag(b) lies in im diag(a).
inline bool is_module_isomorphism(const Matrix& M, const std::vector<Scalar>& src_orders, const std::vector<Scalar>& tgt_orders) {
  const auto& ctx = M.ctx();
  const std::size_t a = src_orders.size(), b = tgt_orders.size();
  if (b == 0) {
    // target zero: iso iff source zero
    return a == 0;
  }
  Matrix Db(ctx, b, b);
  for (std::size_t j = 0; j < b; ++j) Db.set(j, j, tgt_orders[j]);
  Matrix P = Matrix::hconcat(M, Db);
  SmithForm sp = smith_normal_form(P);
  if (sp.rank < b) return false;
  for (std::size_t i = 0; i < b; ++i)
    if (!is_unit(sp.S(i, i))) return false;
  if (a == 0) return true;
  Matrix Q = Matrix::hconcat(M, -Db);
  Matrix ker = kernel_basis(Q);
  for (std::size_t c = 0; c < ker.cols(); ++c)
    for (std::size_t i = 0; i < a; ++i)
      if (!divides(src_orders[i], ker(i, c))) return false;
  return true;
}

}  // namespace dgm
