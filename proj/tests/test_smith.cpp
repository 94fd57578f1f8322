#include <gtest/gtest.h>

#include <random>

#include "dgmorse/smith.hpp"
#include "oracles.hpp"

using namespace dgm;

namespace {
Matrix int_matrix(const oracle::IntMat& a) {
  Matrix m(ScalarContext::integers(), a.size(), a.empty() ? 0 : a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m.set(i, j, Scalar(a[i][j]));
  return m;
}
oracle::IntMat to_int(const Matrix& m) {
  oracle::IntMat a(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = std::get<Integer>(m(i, j).value());
  return a;
}
void expect_valid(const Matrix& a, const SmithForm& f) {
  EXPECT_EQ(f.U * a * f.V, f.S);
  EXPECT_EQ(f.U * f.U_inv, Matrix::identity(a.ctx(), a.rows()));
  EXPECT_EQ(f.V * f.V_inv, Matrix::identity(a.ctx(), a.cols()));
  for (std::size_t i = 0; i < f.S.rows(); ++i)
    for (std::size_t j = 0; j < f.S.cols(); ++j)
      if (i != j || i >= f.rank) EXPECT_TRUE(f.S(i, j).is_zero());
  for (std::size_t i = 0; i + 1 < f.rank; ++i) EXPECT_TRUE(divides(f.S(i, i), f.S(i + 1, i + 1)));
}
}  // namespace

TEST(Smith, CoprimeDiagonal) {
  Matrix a = int_matrix({{2, 0}, {0, 3}});
  auto f = smith_normal_form(a);
  expect_valid(a, f);
  EXPECT_EQ(f.S(0, 0), Scalar(1));
  EXPECT_EQ(f.S(1, 1), Scalar(6));
}

TEST(Smith, TwoByTwo) {
  Matrix a = int_matrix({{2, 4}, {6, 8}});
  auto f = smith_normal_form(a);
  expect_valid(a, f);
  EXPECT_EQ(f.S(0, 0), Scalar(2));
  EXPECT_EQ(f.S(1, 1), Scalar(4));
}

TEST(Smith, LaurentOneByOne) {
  auto ctx = ScalarContext::laurent_over(ScalarContext::rationals(), "t");
  Matrix a(ctx, 1, 1);
  a.set(0, 0, Laurent<Rational>(Rational(1), {{0, Rational(1)}, {1, Rational(-1)}}));
  auto f = smith_normal_form(a);
  expect_valid(a, f);
  // associate of 1 - t with lowest exponent 0 and leading coefficient 1
  EXPECT_EQ(f.S(0, 0), Scalar(Laurent<Rational>(Rational(1), {{0, Rational(-1)}, {1, Rational(1)}})));
  EXPECT_TRUE(is_unit(determinant(f.U)));
}

TEST(Smith, LaurentGcd) {
  auto ctx = ScalarContext::laurent_over(ScalarContext::prime_field(7), "t");
  auto L = [&](std::vector<std::pair<long, long>> ts) {
    std::vector<Laurent<Modp>::Term> t;
    for (auto [e, c] : ts) t.emplace_back(e, Modp(c, 7));
    return Scalar(Laurent<Modp>(Modp(1, 7), t));
  };
  Matrix a(ctx, 2, 2);
  a.set(0, 0, L({{0, 1}, {2, -1}}));   // 1 - t^2
  a.set(0, 1, L({{-1, 1}, {0, -1}}));  // t^-1 - 1
  a.set(1, 0, L({{0, 1}, {1, 1}}));    // 1 + t
  a.set(1, 1, L({{3, 2}}));
  auto f = smith_normal_form(a);
  expect_valid(a, f);
  EXPECT_TRUE(is_unit(determinant(f.U)));
  EXPECT_TRUE(is_unit(determinant(f.V)));
}

TEST(Smith, FieldEntriesAreZeroOrOne) {
  auto q = ScalarContext::rationals();
  Matrix a(q, 3, 3);
  long vals[3][3] = {{2, 4, 6}, {1, 3, 5}, {3, 7, 11}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.set(i, j, Scalar(vals[i][j]));
  auto f = smith_normal_form(a);
  expect_valid(a, f);
  EXPECT_EQ(f.rank, 2u);
  for (std::size_t i = 0; i < f.rank; ++i) EXPECT_EQ(f.S(i, i), make_scalar(q, 1));
}

TEST(Smith, RandomAgainstDeterminantalDivisors) {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    oracle::IntMat a(m, std::vector<mpz_class>(n));
    for (auto& row : a)
      for (auto& x : row) x = static_cast<long>(rng() % 13) - 6;
    Matrix A = int_matrix(a);
    auto f = smith_normal_form(A);
    expect_valid(A, f);
    auto expected = oracle::invariant_factors(a);
    ASSERT_EQ(expected.size(), f.rank);
    for (std::size_t i = 0; i < f.rank; ++i) EXPECT_EQ(f.S(i, i), Scalar(Integer(abs(expected[i]))));
    auto du = oracle::det(to_int(f.U)), dv = oracle::det(to_int(f.V));
    EXPECT_TRUE(du == 1 || du == -1);
    EXPECT_TRUE(dv == 1 || dv == -1);
  }
}

TEST(Smith, BareissMatchesCofactor) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 6;
    oracle::IntMat a(n, std::vector<mpz_class>(n));
    for (auto& row : a)
      for (auto& x : row) x = static_cast<long>(rng() % 21) - 10;
    EXPECT_EQ(determinant(int_matrix(a)), Scalar(oracle::det(a)));
    EXPECT_EQ(oracle::det_bareiss(a), oracle::det(a));
  }
}

TEST(Smith, KernelBasis) {
  Matrix a = int_matrix({{1, 2, 3}, {2, 4, 6}});
  Matrix k = kernel_basis(a);
  EXPECT_EQ(k.cols(), 2u);
  EXPECT_TRUE((a * k).is_zero());
}
