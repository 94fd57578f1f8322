#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgmorse/matrix.hpp"

namespace dgm {

/// Finite free graded complex with homological grading: d(k) maps C_k to
/// C_{k-1}, rows indexed by the basis of C_{k-1}. Every basis element also
/// carries a filtration level (the critical index for twisted complexes).
struct ChainComplex {
  ScalarContext ctx;
  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::vector<int>> levels;
  std::map<int, Matrix> diff;

  void add_generator(int degree, std::string label, int level) {
    labels[degree].push_back(std::move(label));
    levels[degree].push_back(level);
  }

  std::size_t rank(int k) const {
    auto it = labels.find(k);
    return it == labels.end() ? 0 : it->second.size();
  }
  int min_degree() const {
    for (const auto& [k, v] : labels)
      if (!v.empty()) return k;
    return 0;
  }
  int max_degree() const {
    for (auto it = labels.rbegin(); it != labels.rend(); ++it)
      if (!it->second.empty()) return it->first;
    return -1;
  }
  const std::vector<std::string>& basis(int k) const {
    static const std::vector<std::string> none;
    auto it = labels.find(k);
    return it == labels.end() ? none : it->second;
  }
  int level(int k, std::size_t i) const { return levels.at(k)[i]; }

  Matrix d(int k) const {
    auto it = diff.find(k);
    if (it != diff.end()) return it->second;
    return Matrix(ctx, rank(k - 1), rank(k));
  }
  void set_d(int k, Matrix m) {
    if (m.rows() != rank(k - 1) || m.cols() != rank(k))
      fail(ErrorCode::DegreeMismatch, "differential in degree " + std::to_string(k) + " has shape " + m.shape());
    diff[k] = std::move(m);
  }

  /// Throws DSquaredNonzero naming the first degree and column where d∘d fails.
  void certify_d_squared() const {
    for (int k = min_degree() + 2; k <= max_degree(); ++k) {
      Matrix dd = d(k - 1) * d(k);
      for (std::size_t j = 0; j < dd.cols(); ++j)
        for (std::size_t i = 0; i < dd.rows(); ++i)
          if (!dd(i, j).is_zero())
            fail(ErrorCode::DSquaredNonzero, "degree " + std::to_string(k) + ", column " + basis(k)[j] + ": d∘d = " +
                                                  dd(i, j).to_string(ctx.var) + " on " + basis(k - 2)[i]);
    }
  }

  long euler_characteristic() const {
    long chi = 0;
    for (const auto& [k, v] : labels) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(v.size());
    return chi;
  }

  /// Same content with every degree moved by s.
  ChainComplex shifted(int s) const {
    ChainComplex c;
    c.ctx = ctx;
    for (const auto& [k, v] : labels) c.labels[k + s] = v;
    for (const auto& [k, v] : levels) c.levels[k + s] = v;
    for (const auto& [k, v] : diff) c.diff[k + s] = v;
    return c;
  }
};

/// Degree-preserving (after the declared shift) map between complexes.
struct ChainMap {
  const ChainComplex* source = nullptr;
  const ChainComplex* target = nullptr;
  std::map<int, Matrix> maps;  // maps[k]: source_k -> target_k

  Matrix at(int k) const {
    auto it = maps.find(k);
    if (it != maps.end()) return it->second;
    return Matrix(source->ctx, target->rank(k), source->rank(k));
  }

  /// Throws NotAChainMap with the residual of d∘f - f∘d.
  void certify() const {
    int lo = std::min(source->min_degree(), target->min_degree());
    int hi = std::max(source->max_degree(), target->max_degree());
    for (int k = lo; k <= hi; ++k) {
      Matrix lhs = target->d(k) * at(k);
      Matrix rhs = at(k - 1) * source->d(k);
      Matrix res = lhs - rhs;
      for (std::size_t j = 0; j < res.cols(); ++j)
        for (std::size_t i = 0; i < res.rows(); ++i)
          if (!res(i, j).is_zero())
            fail(ErrorCode::NotAChainMap, "degree " + std::to_string(k) + ", column " + source->basis(k)[j] +
                                              ": residual " + res(i, j).to_string(source->ctx.var) + " on " +
                                              target->basis(k - 1)[i]);
    }
  }

  ChainMap compose_after(const ChainMap& first) const {
    ChainMap c{first.source, target, {}};
    for (int k = first.source->min_degree(); k <= first.source->max_degree(); ++k) c.maps[k] = at(k) * first.at(k);
    return c;
  }
};

/// Mapping cone with differential [[-d_src, 0], [f, d_tgt]]: Cone_k = src_{k-1} ⊕ tgt_k.
inline ChainComplex mapping_cone(const ChainMap& f) {
  const ChainComplex& S = *f.source;
  const ChainComplex& T = *f.target;
  ChainComplex c;
  c.ctx = T.ctx;
  int lo = std::min(S.min_degree() + 1, T.min_degree());
  int hi = std::max(S.max_degree() + 1, T.max_degree());
  for (int k = lo; k <= hi; ++k) {
    for (const auto& l : S.basis(k - 1)) c.add_generator(k, "s:" + l, 0);
    for (const auto& l : T.basis(k)) c.add_generator(k, "t:" + l, 0);
  }
  for (int k = lo + 1; k <= hi; ++k) {
    Matrix m(c.ctx, c.rank(k - 1), c.rank(k));
    std::size_t s1 = S.rank(k - 1), s2 = S.rank(k - 2), t1 = T.rank(k);
    Matrix ds = S.d(k - 1), dt = T.d(k), fk = f.at(k - 1);
    for (std::size_t i = 0; i < s2; ++i)
      for (std::size_t j = 0; j < s1; ++j) m.set(i, j, -ds(i, j));
    for (std::size_t i = 0; i < T.rank(k - 1); ++i) {
      for (std::size_t j = 0; j < s1; ++j) m.set(s2 + i, j, fk(i, j));
      for (std::size_t j = 0; j < t1; ++j) m.set(s2 + i, s1 + j, dt(i, j));
    }
    c.set_d(k, std::move(m));
  }
  return c;
}

}  // namespace dgm
