#pragma once

#include <vector>

#include "dgmorse/matrix.hpp"

namespace dgm {

/// U * A * V == S, S diagonal with d_1 | d_2 | ... and every nonzero d_i in
/// canonical associate form. The inverses of U and V are tracked alongside.
struct SmithForm {
  Matrix U, U_inv, S, V, V_inv;
  std::size_t rank = 0;

  std::vector<Scalar> diagonal() const {
    std::vector<Scalar> d;
    for (std::size_t i = 0; i < rank; ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

struct SmithState {
  SmithForm f;

  void swap_rows(std::size_t a, std::size_t b) {
    f.S.swap_rows(a, b);
    f.U.swap_rows(a, b);
    f.U_inv.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    f.S.swap_cols(a, b);
    f.V.swap_cols(a, b);
    f.V_inv.swap_rows(a, b);
  }
  // row_i += c row_j
  void add_row(std::size_t i, std::size_t j, const Scalar& c) {
    f.S.add_row(i, j, c);
    f.U.add_row(i, j, c);
    f.U_inv.add_col(j, i, -c);
  }
  // col_i += c col_j
  void add_col(std::size_t i, std::size_t j, const Scalar& c) {
    f.S.add_col(i, j, c);
    f.V.add_col(i, j, c);
    f.V_inv.add_row(j, i, -c);
  }
  void scale_row(std::size_t i, const Scalar& u) {
    f.S.scale_row(i, u);
    f.U.scale_row(i, u);
    f.U_inv.scale_col(i, unit_inverse(u));
  }
};

}  // namespace detail

inline SmithForm smith_normal_form(const Matrix& a) {
  const auto& ctx = a.ctx();
  const std::size_t m = a.rows(), n = a.cols();
  detail::SmithState st{{Matrix::identity(ctx, m), Matrix::identity(ctx, m), a, Matrix::identity(ctx, n),
                         Matrix::identity(ctx, n), 0}};
  auto& S = st.f.S;

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // smallest-norm pivot in the remaining block, first in row-major order on ties
    bool found = false;
    std::size_t pi = 0, pj = 0;
    Integer best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (S(i, j).is_zero()) continue;
        Integer nn = euclid_norm(S(i, j));
        if (!found || nn < best) {
          found = true;
          best = nn;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    st.swap_rows(t, pi);
    st.swap_cols(t, pj);

    for (;;) {
      bool again = false;
      for (std::size_t i = t + 1; i < m && !again; ++i) {
        if (S(i, t).is_zero()) continue;
        auto [q, r] = divmod(S(i, t), S(t, t));
        st.add_row(i, t, -q);
        if (!r.is_zero()) {
          st.swap_rows(t, i);
          again = true;
        }
      }
      for (std::size_t j = t + 1; j < n && !again; ++j) {
        if (S(t, j).is_zero()) continue;
        auto [q, r] = divmod(S(t, j), S(t, t));
        st.add_col(j, t, -q);
        if (!r.is_zero()) {
          st.swap_cols(t, j);
          again = true;
        }
      }
      if (again) continue;
      // pivot must divide the rest of the block; otherwise fold an offending row in
      for (std::size_t i = t + 1; i < m && !again; ++i)
        for (std::size_t j = t + 1; j < n && !again; ++j)
          if (!divides(S(t, t), S(i, j))) {
            st.add_row(t, i, make_scalar(ctx, 1));
            again = true;
          }
      if (!again) break;
    }
    st.scale_row(t, normalizing_unit(S(t, t)));
  }
  st.f.rank = t;
  return st.f;
}

/// Columns spanning the kernel of A (a free module; the last columns of V).
inline Matrix kernel_basis(const Matrix& a) {
  SmithForm f = smith_normal_form(a);
  std::vector<std::size_t> cols;
  for (std::size_t j = f.rank; j < a.cols(); ++j) cols.push_back(j);
  return f.V.select_columns(cols);
}

}  // namespace dgm
