#pragma once

#include <optional>
#include <vector>

#include "dgmorse/matrix.hpp"

namespace dgm::field {

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    a.scale_row(r, unit_inverse(a(r, c)));
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != r && !a(i, c).is_zero()) a.add_row(i, r, -a(i, c));
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix a) { return rref(a).size(); }

/// Columns spanning the null space.
inline Matrix nullspace(const Matrix& a) {
  Matrix r = a;
  auto piv = rref(r);
  std::vector<bool> is_piv(a.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_piv[c]) free.push_back(c);
  Matrix n(a.ctx(), a.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    n.set(free[k], k, 1);
    for (std::size_t i = 0; i < piv.size(); ++i) n.set(piv[i], k, -r(i, free[k]));
  }
  return n;
}

/// Linearly independent subset of the columns spanning the same space.
inline Matrix column_basis(const Matrix& a) {
  Matrix r = a;
  auto piv = rref(r);
  return a.select_columns(piv);
}

/// Some x with a x = b (b a single column), if one exists.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  Matrix aug = Matrix::hconcat(a, b);
  auto piv = rref(aug);
  Matrix x(a.ctx(), a.cols(), 1);
  for (std::size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == a.cols()) return std::nullopt;
    x.set(piv[i], 0, aug(i, a.cols()));
  }
  return x;
}

/// Quotient Z / B for column spaces B ⊆ Z: a basis of B followed by
/// complement vectors taken from Z. coords() returns the complement part.
struct Quotient {
  Matrix basis;   // [B-basis | complement]
  std::size_t nb = 0;
  std::size_t dim() const { return basis.cols() - nb; }
  Matrix complement() const {
    std::vector<std::size_t> cols;
    for (std::size_t j = nb; j < basis.cols(); ++j) cols.push_back(j);
    return basis.select_columns(cols);
  }
  std::vector<Scalar> coords(const Matrix& v) const {
    auto x = solve(basis, v);
    if (!x) fail(ErrorCode::DegreeMismatch, "vector outside the subquotient's ambient space");
    std::vector<Scalar> out;
    for (std::size_t j = nb; j < basis.cols(); ++j) out.push_back((*x)(j, 0));
    return out;
  }
};

inline Quotient quotient(const Matrix& Z, const Matrix& B) {
  Quotient q;
  Matrix bb = column_basis(B);
  q.nb = bb.cols();
  Matrix all = Matrix::hconcat(bb, Z);
  q.basis = column_basis(all);
  return q;
}

}  // namespace dgm::field
