#include <gtest/gtest.h>

#include "dgmorse/scalar.hpp"

using namespace dgm;

namespace {
Scalar lq(std::vector<std::pair<long, long>> terms) {
  std::vector<Laurent<Rational>::Term> t;
  for (auto [e, c] : terms) t.emplace_back(e, Rational(c));
  return Laurent<Rational>(Rational(1), t);
}
}  // namespace

TEST(Scalar, IntegerArithmetic) {
  Scalar a(7), b(-3);
  EXPECT_EQ(a + b, Scalar(4));
  EXPECT_EQ(a * b, Scalar(-21));
  EXPECT_EQ(-a, Scalar(-7));
  auto [q, r] = divmod(Scalar(-7), Scalar(3));
  EXPECT_EQ(q * Scalar(3) + r, Scalar(-7));
  EXPECT_LT(euclid_norm(r), 3);
}

TEST(Scalar, PrimeField) {
  auto f5 = ScalarContext::prime_field(5);
  Scalar a = make_scalar(f5, 3), b = make_scalar(f5, 4);
  EXPECT_EQ(a + b, make_scalar(f5, 2));
  EXPECT_EQ(a * b, make_scalar(f5, 2));
  EXPECT_EQ(a * unit_inverse(a), make_scalar(f5, 1));
  EXPECT_EQ(make_scalar(f5, -1), make_scalar(f5, 4));
  EXPECT_THROW(ScalarContext::prime_field(6), Error);
}

TEST(Scalar, RationalCanonical) {
  Scalar a(Rational(2, 4)), b(Rational(1, 2));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.to_string(), "1/2");
}

TEST(Scalar, LaurentNormalized) {
  // (1 - t)(1 + t + t^2) = 1 - t^3
  Scalar p = lq({{0, 1}, {1, -1}}) * lq({{0, 1}, {1, 1}, {2, 1}});
  EXPECT_EQ(p, lq({{0, 1}, {3, -1}}));
  EXPECT_EQ(p.to_string(), "1 - t^3");
  const auto& l = std::get<Laurent<Rational>>(p.value());
  EXPECT_EQ(l.terms().size(), 2u);
  Scalar z = lq({{2, 1}, {2, -1}});
  EXPECT_TRUE(z.is_zero());
}

TEST(Scalar, LaurentDivision) {
  Scalar a = lq({{-2, 3}, {0, 1}, {4, -5}});
  Scalar b = lq({{1, 1}, {2, -1}});
  auto [q, r] = divmod(a, b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(euclid_norm(r), euclid_norm(b));
  EXPECT_TRUE(is_unit(lq({{-3, 7}})));
  EXPECT_FALSE(is_unit(lq({{0, 1}, {1, -1}})));
  // canonical associate of t^-1 - 1 is 1 - t... up to the monic convention: t - 1 scaled to lowest exponent 0
  Scalar n = unit_normalized(lq({{-1, 1}, {0, -1}}));
  EXPECT_EQ(n, lq({{0, -1}, {1, 1}}));
}

TEST(Scalar, Promotion) {
  auto ql = ScalarContext::laurent_over(ScalarContext::rationals(), "t");
  Scalar one = make_scalar(ql, 1);
  EXPECT_EQ(one + Scalar(2), make_scalar(ql, 3));
  EXPECT_THROW(make_scalar(ScalarContext::prime_field(3), 1) + Scalar(Rational(1, 2)).in(ScalarContext::rationals()) +
                   lq({{0, 1}}),
               Error);
  EXPECT_THROW(ScalarContext::laurent_over(ScalarContext::integers(), "t"), Error);
}
