#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dgmorse/field_linalg.hpp"
#include "dgmorse/twisted.hpp"

namespace dgm {

/// E^r with dimensions and differentials d^r : E^r_{p,q} -> E^r_{p-r,q+r-1}.
struct SpectralPage {
  int r = 0;
  std::map<std::pair<int, int>, long> dims;             // (p, q) -> dim
  std::map<std::pair<int, int>, Matrix> differentials;  // keyed by source (p, q)
  std::map<std::pair<int, int>, Matrix> representatives;

  long dim(int p, int q) const {
    auto it = dims.find({p, q});
    return it == dims.end() ? 0 : it->second;
  }
  bool differentials_vanish() const {
    for (const auto& [k, m] : differentials)
      if (!m.is_zero()) return false;
    return true;
  }
  long rank_of_d(int p, int q) const {
    auto it = differentials.find({p, q});
    return it == differentials.end() ? 0 : static_cast<long>(field::rank(it->second));
  }
};

struct SpectralSequence {
  std::vector<SpectralPage> pages;  // E^0 .. E^{r_max}
  SpectralPage infinity;
  int stable_from = 0;              // E^r = E^∞ for r >= stable_from
  std::vector<std::string> certificate_failures;
};

/// The index filtration is carried by the complex; this checks that the
/// differential never raises it.
inline void canonical_filtration_check(const ChainComplex& X) {
  for (int k = X.min_degree() + 1; k <= X.max_degree(); ++k) {
    Matrix d = X.d(k);
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (std::size_t i = 0; i < d.rows(); ++i)
        if (!d(i, j).is_zero() && X.level(k - 1, i) > X.level(k, j))
          fail(ErrorCode::DegreeMismatch, "differential raises the filtration at " + X.basis(k)[j]);
  }
}

namespace detail {

struct FilteredData {
  const ChainComplex& X;
  int pmin = 0, pmax = 0;

  // Z^r_p in C_k: {c ∈ F_p C_k : ∂c ∈ F_{p-r}}
  Matrix Z(int r, int p, int k) const {
    const auto& ctx = X.ctx;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < X.rank(k); ++i)
      if (X.level(k, i) <= p) cols.push_back(i);
    Matrix emb(ctx, X.rank(k), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) emb.set(cols[j], j, 1);
    if (r < 0 || cols.empty()) return emb;
    Matrix d = X.d(k);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < X.rank(k - 1); ++i)
      if (X.level(k - 1, i) > p - r) rows.push_back(i);
    if (rows.empty()) return emb;
    Matrix sub(ctx, rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) sub.set(a, b, d(rows[a], cols[b]));
    return emb * field::nullspace(sub);
  }

  // Z^{r-1}_{p-1} + ∂ Z^{r-1}_{p+r-1}
  Matrix B(int r, int p, int k) const {
    Matrix a = Z(r - 1, p - 1, k);
    Matrix b = X.d(k + 1) * Z(r - 1, p + r - 1, k + 1);
    return Matrix::hconcat(a, b);
  }

  field::Quotient E(int r, int p, int k) const { return field::quotient(Z(r, p, k), B(r, p, k)); }
};

}  // namespace detail

inline SpectralSequence compute_pages(const ChainComplex& X, int r_max) {
  if (!X.ctx.is_field()) fail(ErrorCode::FieldRequired, "spectral sequence pages need field scalars, got " + X.ctx.name());
  canonical_filtration_check(X);
  detail::FilteredData fd{X};
  bool first = true;
  for (const auto& [k, lv] : X.levels)
    for (int l : lv) {
      if (first) fd.pmin = fd.pmax = l;
      fd.pmin = std::min(fd.pmin, l);
      fd.pmax = std::max(fd.pmax, l);
      first = false;
    }
  const int length = fd.pmax - fd.pmin;
  const int last = std::max(r_max, length + 1);
  const int kmin = X.min_degree(), kmax = X.max_degree();

  SpectralSequence ss;
  std::vector<SpectralPage> all;
  for (int r = 0; r <= last; ++r) {
    SpectralPage page;
    page.r = r;
    std::map<std::pair<int, int>, field::Quotient> quot;
    for (int k = kmin; k <= kmax; ++k)
      for (int p = fd.pmin; p <= fd.pmax; ++p) {
        auto q = fd.E(r, p, k);
        if (q.dim() > 0) {
          page.dims[{p, k - p}] = static_cast<long>(q.dim());
          page.representatives.emplace(std::make_pair(p, k - p), q.complement());
        }
        quot.emplace(std::make_pair(p, k), std::move(q));
      }
    for (const auto& [pk, q] : quot) {
      auto [p, k] = pk;
      if (q.dim() == 0) continue;
      auto tgt = quot.find({p - r, k - 1});
      if (tgt == quot.end() || tgt->second.dim() == 0) continue;
      Matrix img = X.d(k) * q.complement();
      Matrix D(X.ctx, tgt->second.dim(), q.dim());
      for (std::size_t j = 0; j < q.dim(); ++j) {
        auto c = tgt->second.coords(img.column(j));
        for (std::size_t i = 0; i < c.size(); ++i) D.set(i, j, c[i]);
      }
      page.differentials.emplace(std::make_pair(p, k - p), std::move(D));
    }
    all.push_back(std::move(page));
  }

  // certificates: d^r d^r = 0 and E^{r+1} = H(E^r, d^r)
  for (std::size_t r = 0; r < all.size(); ++r) {
    const auto& P = all[r];
    const int ri = static_cast<int>(r);
    for (const auto& [pq, D] : P.differentials) {
      auto next = P.differentials.find({pq.first - ri, pq.second + ri - 1});
      if (next != P.differentials.end() && !(next->second * D).is_zero())
        ss.certificate_failures.push_back("d^" + std::to_string(r) + "∘d^" + std::to_string(r) + " != 0 at (" +
                                          std::to_string(pq.first) + "," + std::to_string(pq.second) + ")");
    }
    if (r + 1 < all.size()) {
      for (int k = kmin; k <= kmax; ++k)
        for (int p = fd.pmin; p <= fd.pmax; ++p) {
          int q = k - p;
          long ker = P.dim(p, q) - P.rank_of_d(p, q);
          long im = P.rank_of_d(p + ri, q - ri + 1);
          if (all[r + 1].dim(p, q) != ker - im)
            ss.certificate_failures.push_back("E^" + std::to_string(r + 1) + " is not the homology of E^" + std::to_string(r) +
                                              " at (" + std::to_string(p) + "," + std::to_string(q) + ")");
        }
    }
  }

  ss.stable_from = last;
  while (ss.stable_from > 0 && all[ss.stable_from - 1].differentials_vanish()) --ss.stable_from;
  ss.infinity = all.back();
  ss.infinity.differentials.clear();

  // convergence: Σ_{p+q=k} dim E^∞ = dim H_k
  HomologyResult H = homology(X);
  for (int k = kmin; k <= kmax; ++k) {
    long total = 0;
    for (int p = fd.pmin; p <= fd.pmax; ++p) total += ss.infinity.dim(p, k - p);
    if (total != H.at(k).free_rank)
      ss.certificate_failures.push_back("E^∞ total dimension " + std::to_string(total) + " != dim H_" + std::to_string(k));
  }
  all.resize(static_cast<std::size_t>(r_max) + 1);
  ss.pages = std::move(all);
  return ss;
}

/// H_q(F) over a field as a degree-0 module over H_0(R) (the action of
/// positive-degree generators is dropped).
inline DGModule homology_of_module(const DGModule& F, const DGA& R, int q, const ScalarContext& field) {
  if (F.laurent_free) fail(ErrorCode::FieldRequired, "module " + F.name + " is not of finite rank over the field");
  ChainComplex FC;
  FC.ctx = field;
  for (int g = 0; g < static_cast<int>(F.basis.size()); ++g) FC.add_generator(F.basis.degree(g), F.basis.name(g), 0);
  std::map<int, std::size_t> pos;
  for (int g = 0; g < static_cast<int>(F.basis.size()); ++g) {
    int k = F.basis.degree(g);
    std::size_t i = 0;
    for (int h = 0; h < g; ++h) i += F.basis.degree(h) == k;
    pos[g] = i;
  }
  for (int k = FC.min_degree() + 1; k <= FC.max_degree(); ++k) {
    Matrix D(field, FC.rank(k - 1), FC.rank(k));
    for (int g : F.basis.in_degree(k))
      for (const auto& [m, c] : F.d_gen(g).terms) D.add_to(pos[m.gen], pos[g], c);
    FC.set_d(k, D);
  }
  HomologyGroup Hq = homology_in_degree(FC, q);
  DGModule M;
  M.name = "H" + std::to_string(q) + "(" + F.name + ")";
  for (std::size_t i = 0; i < Hq.generators(); ++i) M.basis.gens.push_back({"h" + std::to_string(i), 0});
  auto vec_of = [&](const ModuleElement& e) {
    Matrix v(field, FC.rank(q), 1);
    for (const auto& [m, c] : e.terms) v.add_to(pos[m.gen], 0, c);
    return v;
  };
  auto image = [&](std::size_t i, const AlgebraElement& a) {
    ModuleElement rep;
    for (int g : F.basis.in_degree(q)) rep.add(F.mono(R, g), Hq.reps(pos[g], i));
    auto coords = Hq.coordinates(vec_of(F.act(R, rep, a)));
    ModuleElement out;
    for (std::size_t j = 0; j < coords.size(); ++j) out.add(M.mono(R, static_cast<int>(j)), coords[j]);
    return out;
  };
  for (std::size_t i = 0; i < Hq.generators(); ++i) {
    for (int g : R.basis.in_degree(0))
      if (g != R.unit) M.action[{static_cast<int>(i), R.basis.name(g)}] = image(i, R.gen(g));
    for (std::size_t v = 0; v < R.nvars(); ++v) {
      M.action[{static_cast<int>(i), R.vars[v]}] = image(i, R.var_power(v, 1));
      M.action[{static_cast<int>(i), R.vars[v] + "^-1"}] = image(i, R.var_power(v, -1));
    }
  }
  return M;
}

/// Compares dim E²_{p,q} with dim H_p(C̃; H_q(F)) for every (p, q).
inline Diagnostic e2_cross_check(const SpectralSequence& ss, const DGModule& F, const DGA& R, const CriticalBasis& C,
                                 const CocycleMatrix& m, const ScalarContext& field) {
  Diagnostic diag;
  if (ss.pages.size() < 3) {
    diag.notes.push_back("need pages up to E^2");
    return diag;
  }
  GroupRingComplex L = lifted_complex(C, m, R);
  int qmin = 0, qmax = 0;
  for (const auto& g : F.basis.gens) {
    qmin = std::min(qmin, g.degree);
    qmax = std::max(qmax, g.degree);
  }
  const auto& E2 = ss.pages[2];
  for (int q = qmin; q <= qmax; ++q) {
    DGModule Hq = homology_of_module(F, R, q, field);
    HomologyResult H;
    if (!Hq.basis.gens.empty()) H = local_coefficient_homology(Hq, R, L, field);
    for (int p = 0; p <= C.max_index(); ++p) {
      long expected = Hq.basis.gens.empty() ? 0 : H.at(p).free_rank;
      if (E2.dim(p, q) != expected)
        diag.failures.push_back({"E2(" + std::to_string(p) + "," + std::to_string(q) + ")", "",
                                 std::to_string(E2.dim(p, q)) + " vs " + std::to_string(expected)});
    }
  }
  return diag;
}

}  // namespace dgm
