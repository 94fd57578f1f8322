#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dgmorse/scalar.hpp"

namespace dgm {

/// Dense matrix of scalars living in one context. Entries are converted into
/// the context on write, so Euclidean norms are always the right ones.
class Matrix {
 public:
  Matrix() = default;
  Matrix(ScalarContext ctx, std::size_t rows, std::size_t cols)
      : ctx_(std::move(ctx)), rows_(rows), cols_(cols), data_(rows * cols, make_scalar(ctx_, 0)) {}

  static Matrix identity(const ScalarContext& ctx, std::size_t n) {
    Matrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  const ScalarContext& ctx() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, const Scalar& v) { data_[i * cols_ + j] = v.in(ctx_); }
  void add_to(std::size_t i, std::size_t j, const Scalar& v) { set(i, j, (*this)(i, j) + v); }

  bool is_zero() const {
    for (const auto& s : data_)
      if (!s.is_zero()) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(ctx_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(ctx_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b.data_[i * nc + j] = (*this)(r0 + i, c0 + j);
    return b;
  }
  Matrix column(std::size_t j) const { return block(0, j, rows_, 1); }
  Matrix select_columns(const std::vector<std::size_t>& cols) const {
    Matrix b(ctx_, rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) b.data_[i * cols.size() + j] = (*this)(i, cols[j]);
    return b;
  }

  /// [A | B]
  static Matrix hconcat(const Matrix& a, const Matrix& b) {
    Matrix m(a.ctx_, a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) m.data_[i * m.cols_ + j] = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) m.data_[i * m.cols_ + a.cols_ + j] = b(i, j).in(a.ctx_);
    }
    return m;
  }

  // elementary operations (used by Smith normal form and elimination)
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(data_[a * cols_ + j], data_[b * cols_ + j]);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap(data_[i * cols_ + a], data_[i * cols_ + b]);
  }
  /// row_i += c * row_j
  void add_row(std::size_t i, std::size_t j, const Scalar& c) {
    if (c.is_zero()) return;
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& x = data_[j * cols_ + k];
      if (!x.is_zero()) data_[i * cols_ + k] += c * x;
    }
  }
  /// col_i += c * col_j
  void add_col(std::size_t i, std::size_t j, const Scalar& c) {
    if (c.is_zero()) return;
    for (std::size_t k = 0; k < rows_; ++k) {
      const Scalar& x = data_[k * cols_ + j];
      if (!x.is_zero()) data_[k * cols_ + i] += x * c;
    }
  }
  void scale_row(std::size_t i, const Scalar& c) {
    for (std::size_t k = 0; k < cols_; ++k) data_[i * cols_ + k] *= c;
  }
  void scale_col(std::size_t j, const Scalar& c) {
    for (std::size_t k = 0; k < rows_; ++k) data_[k * cols_ + j] *= c;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      fail(ErrorCode::DegreeMismatch, "matrix product " + a.shape() + " * " + b.shape());
    Matrix c(a.ctx_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Scalar& y = b(k, j);
          if (!y.is_zero()) c.data_[i * c.cols_ + j] += x * y;
        }
      }
    return c;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_shape(a, b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_shape(a, b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix& a) {
    Matrix c = a;
    for (auto& s : c.data_) s = -s;
    return c;
  }
  friend Matrix operator*(const Scalar& s, const Matrix& a) {
    Matrix c = a;
    for (auto& x : c.data_) x = s * x;
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      if (a.data_[i] != b.data_[i]) return false;
    return true;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < rows_; ++i) {
      out += "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) out += ", ";
        out += (*this)(i, j).to_string(ctx_.var);
      }
      out += "]\n";
    }
    return out;
  }

 private:
  static void check_shape(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      fail(ErrorCode::DegreeMismatch, "matrix shapes " + a.shape() + " and " + b.shape());
  }

  ScalarContext ctx_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> data_;
};

/// Fraction-free (Bareiss) determinant; works over any of the supported
/// commutative domains because every division it performs is exact.
inline Scalar determinant(const Matrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::DegreeMismatch, "determinant of non-square " + a.shape());
  const std::size_t n = a.rows();
  if (n == 0) return make_scalar(a.ctx(), 1);
  Matrix m = a;
  Scalar prev = make_scalar(a.ctx(), 1);
  Scalar sign = make_scalar(a.ctx(), 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return make_scalar(a.ctx(), 0);
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Scalar num = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        m.set(i, j, divmod(num, prev).first);
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace dgm
