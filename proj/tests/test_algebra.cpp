#include <gtest/gtest.h>

#include <random>

#include "dgmorse/bundle.hpp"
#include "support.hpp"

using namespace dgm;
using testing_support::alg;
using testing_support::mod;

namespace {

const char* kFree = R"(bundle free
dim 2
scalars Z

dga
  gen 1 0
  gen u 1
  gen u2 2
  gen u3 3
  window 0 3
  unit 1
  group finite 1
  mul u u = u2
  mul u u2 = u3
  mul u2 u = u3
end

module fiber
  gen e0 0
  gen e1 1
  act e0 u = e1
end

module tower
  gen e0 0
  gen e1 1
  gen e2 2
  act e0 u = e1
  act e1 u = e2
  act e0 u2 = e2
end

module tower-bad
  gen e0 0
  gen e1 1
  gen e2 2
  act e0 u = -e1
  act e1 u = e2
  act e0 u2 = e2
end
)";

const char* kLaurent = R"(bundle laurent
dim 1
scalars Z

dga
  gen 1 0
  window 0 0
  unit 1
  var t
  group laurent
end
)";

}  // namespace

TEST(Koszul, Examples) {
  EXPECT_EQ(koszul_sign(0, 5), Scalar(1));
  EXPECT_EQ(koszul_sign(1, 1), Scalar(-1));
  EXPECT_EQ(koszul_sign(3, 2), Scalar(1));
  EXPECT_EQ(koszul_sign(3, 5), Scalar(-1));
}

TEST(ValidateDga, LaurentIsClean) {
  Bundle b = parse_bundle(kLaurent);
  auto rep = validate_dga(b.algebra());
  EXPECT_TRUE(rep.ok()) << (rep.issues.empty() ? "" : rep.issues[0]);
}

TEST(ValidateDga, FreeAlgebraWindowIsClean) {
  Bundle b = parse_bundle(kFree);
  EXPECT_TRUE(validate_dga(b.algebra()).ok());
}

TEST(ValidateDga, DifferentialOutOfWindowIsReported) {
  std::string text = kFree;
  text.replace(text.find("  mul u u = u2"), 0, "  diff u = 1\n");
  Bundle b = parse_bundle(text);
  auto rep = validate_dga(b.algebra());
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& s : rep.issues) found |= s.find("Leibniz fails") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(ValidateDga, MissingProductThrows) {
  std::string text = kFree;
  text.erase(text.find("  mul u2 u = u3\n"), std::string("  mul u2 u = u3\n").size());
  Bundle b = parse_bundle(text);
  try {
    (void)validate_dga(b.algebra());
    FAIL() << "expected MissingTableEntry";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingTableEntry);
    EXPECT_NE(std::string(e.what()).find("mul(u2, u)"), std::string::npos);
  }
}

TEST(ValidateModule, HopfFiberIsClean) {
  Bundle b = parse_bundle(kFree);
  EXPECT_TRUE(validate_module(b.module("fiber"), b.algebra()).ok());
  EXPECT_TRUE(validate_module(b.module("tower"), b.algebra()).ok());
}

TEST(ValidateModule, BrokenHigherEntryNamesTriple) {
  Bundle b = parse_bundle(kFree);
  auto rep = validate_module(b.module("tower-bad"), b.algebra());
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& s : rep.issues) found |= s.find("(e0, u, u)") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(AlgebraEval, UnitAndLaurent) {
  Bundle fb = parse_bundle(kFree);
  const DGA& F = fb.algebra();
  EXPECT_EQ(F.mul(F.one(), alg(F, "u2")), alg(F, "u2"));
  Bundle lb = parse_bundle(kLaurent);
  const DGA& L = lb.algebra();
  EXPECT_EQ(L.mul(alg(L, "1 - t"), alg(L, "1 + t + t^2")), alg(L, "1 - t^3"));
  EXPECT_EQ(alg(L, "t * t^-1"), L.one());
}

namespace {
// a, b of degree 1 with da = 1 - s, db = 1 - t (s, t central)
std::string leibniz_text(const std::string& dab) {
  return std::string(R"(bundle leib
dim 3
scalars Z

dga
  gen 1 0
  gen a 1
  gen b 1
  gen aa 2
  gen ab 2
  gen ba 2
  gen bb 2
  window 0 2
  unit 1
  var s
  var t
  mul a a = aa
  mul a b = ab
  mul b a = ba
  mul b b = bb
  diff a = 1 - s
  diff b = 1 - t
  diff ab = )") + dab + R"(
  diff ba = (1 - t)*a - b*(1 - s)
end
)";
}
bool leibniz_flagged(const ValidationReport& rep) {
  for (const auto& s : rep.issues)
    if (s.find("Leibniz fails on (a, b)") != std::string::npos) return true;
  return false;
}
}  // namespace

TEST(AlgebraEval, LeibnizSign) {
  Bundle good = parse_bundle(leibniz_text("(1 - s)*b - a*(1 - t)"));
  auto rep = validate_dga(good.algebra());
  EXPECT_TRUE(rep.ok()) << (rep.issues.empty() ? "" : rep.issues[0]);
  Bundle bad = parse_bundle(leibniz_text("(1 - s)*b + a*(1 - t)"));
  EXPECT_TRUE(leibniz_flagged(validate_dga(bad.algebra())));
}

TEST(AlgebraEval, WindowOverflowIsAnError) {
  Bundle b = parse_bundle(kFree);
  const DGA& R = b.algebra();
  try {
    (void)R.mul(alg(R, "u2"), alg(R, "u2"));
    FAIL() << "expected WindowOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowOverflow);
  }
}

TEST(AlgebraProperties, AssociativeAndBilinearOnRandomElements) {
  Bundle b = parse_bundle(kLaurent);
  const DGA& R = b.algebra();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4), ex(-3, 3);
  auto random_elem = [&] {
    AlgebraElement a;
    for (int i = 0; i < 3; ++i) a.add(R.var_power(0, ex(rng)).terms.begin()->first, Scalar(coef(rng)));
    return a;
  };
  for (int trial = 0; trial < 200; ++trial) {
    auto x = random_elem(), y = random_elem(), z = random_elem();
    EXPECT_EQ(R.mul(R.mul(x, y), z), R.mul(x, R.mul(y, z)));
    EXPECT_EQ(R.mul(x.plus(y), z), R.mul(x, z).plus(R.mul(y, z)));
    EXPECT_EQ(R.mul(x, y.plus(z)), R.mul(x, y).plus(R.mul(x, z)));
  }
}

TEST(AlgebraProperties, InvolutionOnHopfAlgebra) {
  std::string text = kFree;
  text.replace(text.find("end\n"), 0, "  inv u = -u\n  inv u2 = -u2\n  inv u3 = u3\n");
  Bundle b = parse_bundle(text);
  const DGA& R = b.algebra();
  EXPECT_TRUE(validate_dga(R).ok());
  for (const char* g : {"u", "u2", "u3"}) EXPECT_EQ(R.inv(R.inv(alg(R, g))), alg(R, g));
  // I(u*u) = (-1)^{1*1} I(u) I(u) = -u2
  EXPECT_EQ(R.inv(alg(R, "u2")), alg(R, "-u2"));
}

TEST(AlgebraProperties, NonAntiHomomorphicInvolutionIsReported) {
  std::string text = kFree;
  text.replace(text.find("end\n"), 0, "  inv u = -u\n  inv u2 = u2\n  inv u3 = u3\n");
  Bundle b = parse_bundle(text);
  EXPECT_FALSE(validate_dga(b.algebra()).ok());
}

TEST(ModuleAction, FiberTable) {
  Bundle b = parse_bundle(kFree);
  const DGA& R = b.algebra();
  const DGModule& F = b.module("fiber");
  EXPECT_EQ(F.act(R, mod(R, F, "e0"), alg(R, "u")), mod(R, F, "e1"));
  EXPECT_TRUE(F.act(R, mod(R, F, "e1"), alg(R, "u")).is_zero());
  EXPECT_TRUE(F.act(R, mod(R, F, "e0"), alg(R, "u2")).is_zero());
}
