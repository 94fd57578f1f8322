#include <gtest/gtest.h>

#include "dgmorse/corpus.hpp"
#include "dgmorse/report.hpp"
#include "support.hpp"

using namespace dgm;
using testing_support::alg;
using testing_support::group_of;
using testing_support::oracle_homology;

namespace {

oracle::Homology Zr(long r, std::vector<mpz_class> t = {}) { return {r, std::move(t)}; }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::SchemaViolation;
}

}  // namespace

TEST(OppositeGrading, NegatesDegreesAndIsInvolutive) {
  Bundle b = load_example("hopf");
  const DGModule& F = b.module("fiber");
  DGModule G = opposite_grading(F);
  EXPECT_EQ(G.sense, Sense::Cohomological);
  std::map<std::string, int> deg;
  for (const auto& g : G.basis.gens) deg[g.name] = g.degree;
  EXPECT_EQ(deg["e0"], 0);
  EXPECT_EQ(deg["e1"], -1);
  DGModule back = opposite_grading(G);
  EXPECT_EQ(back.sense, F.sense);
  ASSERT_EQ(back.basis.gens.size(), F.basis.gens.size());
  for (std::size_t i = 0; i < F.basis.gens.size(); ++i) EXPECT_EQ(back.basis.gens[i].degree, F.basis.gens[i].degree);
  EXPECT_EQ(back.basis.dmin, F.basis.dmin);
  EXPECT_EQ(back.basis.dmax, F.basis.dmax);

  // degree-zero module: nothing moves but the sense
  DGModule T = opposite_grading(b.module("trivial"));
  for (const auto& g : T.basis.gens) EXPECT_EQ(g.degree, 0);
}

TEST(CohomologicalCocycle, ZeroStaysZero) {
  Bundle b = load_example("hopf");
  const auto& m = b.cocycle("m");
  CocycleMatrix zero;
  EXPECT_TRUE(cohomological_cocycle(b.algebra(), m.row_basis, zero).entries.empty());
}

TEST(CohomologicalCocycle, CircleLoop) {
  Bundle b = load_example("circle");
  DGA R = b.algebra();
  R.involution.emplace();  // t -> t^-1 only
  const auto& m = b.cocycle("m");
  const auto& C = m.row_basis;
  CocycleMatrix mv = cohomological_cocycle(R, C, m.m);
  // sign (-1)^{0*1 + 1 + 1} = +1
  EXPECT_EQ(mv.at(C.find("min"), C.find("max")), alg(R, "1 - t^-1"));
  EXPECT_TRUE(mv.at(C.find("max"), C.find("min")).is_zero());
}

TEST(CohomologicalCocycle, HopfSign) {
  Bundle b = load_example("hopf");
  const DGA& R = b.algebra();
  const auto& m = b.cocycle("m");
  const auto& C = m.row_basis;
  CocycleMatrix mv = cohomological_cocycle(R, C, m.m);
  // m(max, min) = u, I(u) = -u, sign (-1)^{0 + 2 + 1} = -1
  EXPECT_EQ(mv.at(C.find("min"), C.find("max")), m.m.at(C.find("max"), C.find("min")));
  EXPECT_TRUE(check_cohomological_mc(C, R, mv).ok());
}

TEST(CohomologicalCocycle, CorpusPairsSatisfyDualEquation) {
  for (const char* name : {"sphere2-pd-pair", "klein-pd-pair", "hopf", "rp2", "sphere2"}) {
    Bundle b = load_example(name);
    const DGA& R = b.algebra();
    if (!R.involution) continue;
    const auto& m = b.cocycle("m");
    auto d = check_cohomological_mc(m.row_basis, R, cohomological_cocycle(R, m.row_basis, m.m));
    EXPECT_TRUE(d.ok()) << name;
  }
}

TEST(CohomologicalCocycle, BrokenInvolutionBreaksDualEquation) {
  // I(a) = -a but I(ab) = ab is not anti-multiplicative; the dual relation should notice
  Bundle b = load_example("klein-pd-pair");
  DGA R = b.algebra();
  EXPECT_TRUE(validate_dga(R).ok());
  for (auto& [g, img] : *R.involution)
    if (R.basis.name(g) == "a") img = alg(R, "-a");
  EXPECT_FALSE(validate_dga(R).ok());
  const auto& m = b.cocycle("m");
  auto d = check_cohomological_mc(m.row_basis, R, cohomological_cocycle(R, m.row_basis, m.m));
  EXPECT_FALSE(d.ok());
}

TEST(Cochains, DifferentialSquaresToZero) {
  for (const char* name : {"sphere2-pd-pair", "klein-pd-pair"}) {
    Bundle b = load_example(name);
    const DGA& R = b.algebra();
    const auto& dual = b.cocycle("mdual");
    ChainComplex Y = build_cochain_complex(opposite_grading(b.module("trivial")), R, dual.row_basis, dual.m,
                                           ScalarContext::integers(), false);
    for (int k = Y.min_degree() + 1; k < Y.max_degree(); ++k)
      EXPECT_TRUE((Y.d(k) * Y.d(k + 1)).is_zero()) << name << " " << k;
  }
}

TEST(Cochains, HomologicalModuleRejected) {
  Bundle b = load_example("klein-pd-pair");
  const auto& dual = b.cocycle("mdual");
  EXPECT_EQ(code_of([&] {
              (void)build_cochain_complex(b.module("trivial"), b.algebra(), dual.row_basis, dual.m, ScalarContext::integers());
            }),
            ErrorCode::SchemaViolation);
}

TEST(Characters, OrientationSystems) {
  Bundle rp = load_example("rp2");
  const DGA& R = rp.algebra();
  Group G = R.group();
  auto Z = ScalarContext::integers();
  const auto& m = rp.cocycle("m");
  GroupRingComplex L = lifted_complex(m.row_basis, m.m, R);

  SignCharacter triv = close_character(G, {{Group::Elem{1}, 1}});
  EXPECT_TRUE(triv.trivial());
  auto Ht = local_coefficient_homology(orientation_system(triv, R), R, L, Z);
  EXPECT_EQ(group_of(Ht, 0), Zr(1));
  EXPECT_EQ(group_of(Ht, 1), Zr(0, {2}));

  SignCharacter sign = close_character(G, {{Group::Elem{1}, -1}});
  auto Hs = local_coefficient_homology(orientation_system(sign, R), R, L, Z);
  EXPECT_EQ(group_of(Hs, 0), Zr(0, {2}));
  EXPECT_EQ(group_of(Hs, 1), Zr(0));
  EXPECT_EQ(group_of(Hs, 2), Zr(1));

  // Z twisted by the sign is the sign module
  DGModule tw = twist_by_character(rp.module("trivial"), sign, R);
  auto Htw = local_coefficient_homology(tw, R, L, Z);
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(group_of(Htw, k), group_of(Hs, k)) << k;
}

TEST(Characters, TwistIdentities) {
  Bundle b = load_example("rp2");
  const DGA& R = b.algebra();
  SignCharacter sign = close_character(R.group(), {{Group::Elem{1}, -1}});
  const DGModule& F = b.module("regular");
  DGModule same = twist_by_character(F, close_character(R.group(), {{Group::Elem{1}, 1}}), R);
  EXPECT_EQ(same.action, F.action);
  DGModule twice = twist_by_character(twist_by_character(F, sign, R), sign, R);
  EXPECT_EQ(twice.action, F.action);
}

TEST(Characters, KleinClosure) {
  Bundle b = load_example("klein");
  Group G = b.algebra().group();
  // a, b, ab are indices 1, 2, 3
  SignCharacter w = close_character(G, {{Group::Elem{1}, 1}, {Group::Elem{2}, -1}});
  EXPECT_EQ(w(Group::Elem{3}), -1);
  EXPECT_EQ(code_of([&] { (void)close_character(G, {{Group::Elem{1}, -1}, {Group::Elem{2}, -1}, {Group::Elem{3}, -1}}); }),
            ErrorCode::InconsistentCharacter);
  EXPECT_EQ(code_of([&] { (void)close_character(G, {{Group::Elem{1}, -1}}); }), ErrorCode::InconsistentCharacter);
}

TEST(Characters, PositiveDegreeMonomialHasNoSign) {
  Bundle b = load_example("hopf");
  const DGA& R = b.algebra();
  SignCharacter w = close_character(R.group(), {});
  EXPECT_FALSE(monomial_sign(w, R, alg(R, "u").terms.begin()->first).has_value());
}

TEST(Duality, Sphere2) {
  Bundle b = load_example("sphere2-pd-pair");
  DualityResult r = compute_pairing(b, "pd");
  EXPECT_TRUE(r.iso);
  for (int k = 0; k <= 2; ++k) {
    oracle::Homology want = (k == 1) ? Zr(0) : Zr(1);
    EXPECT_EQ(group_of(r.h_homological, k), want) << k;
    EXPECT_EQ(group_of(r.h_cochain, k), want) << k;
  }
}

TEST(Duality, KleinWithOrientation) {
  Bundle b = load_example("klein-pd-pair");
  DualityResult r = compute_pairing(b, "pd");
  EXPECT_TRUE(r.iso);
  std::vector<oracle::Homology> hom = {Zr(1), Zr(1, {2}), Zr(0)};
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(group_of(r.h_homological, k), hom[k]) << k;
  // H^{2-k}(K; o): H^0 = 0, H^1 = Z + Z/2, H^2 = Z
  std::vector<oracle::Homology> coh = {Zr(0), Zr(1, {2}), Zr(1)};
  for (int c = 0; c <= 2; ++c) EXPECT_EQ(group_of(r.h_cochain, 2 - c), coh[c]) << c;
  auto o = oracle_homology(*r.cochain);
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(o[k], hom[k]) << k;
}

TEST(Duality, AlteredEntryIsMismatch) {
  Bundle b = load_example("klein-pd-pair");
  const DGA& R = b.algebra();
  const auto& dual = b.cocycle("mdual");
  const auto& C = dual.row_basis;
  // m^{-f} re-keyed into C's order, then one entry flipped
  const auto& hom = b.cocycle("mneg");
  CocycleMatrix mneg;
  for (const auto& [k, v] : hom.m.entries)
    mneg.set(C.find(hom.row_basis.name(k.first)), C.find(hom.row_basis.name(k.second)), v);
  std::optional<SignCharacter> w = b.character("w");
  EXPECT_NO_THROW((void)poincare_duality_map(b.module("trivial"), R, C, mneg, dual.m, w, ScalarContext::integers()));
  auto key = mneg.entries.begin()->first;
  mneg.set(key.first, key.second, mneg.at(key.first, key.second).scaled(Scalar(-1)));
  EXPECT_EQ(code_of([&] {
              (void)poincare_duality_map(b.module("trivial"), R, C, mneg, dual.m, w, ScalarContext::integers());
            }),
            ErrorCode::PairingMismatch);
}

TEST(Duality, PointIsIdentity) {
  Bundle b = load_example("rp2");
  const DGA& R = b.algebra();
  CriticalBasis P;
  P.ambient_dim = 0;
  P.points = {{"p", 0}};
  DualityResult r = poincare_duality_map(b.module("trivial"), R, P, CocycleMatrix{}, CocycleMatrix{}, std::nullopt,
                                         ScalarContext::integers());
  EXPECT_TRUE(r.iso);
  ASSERT_EQ(r.pd.maps.size(), 1u);
  const Matrix& M = r.pd.maps.begin()->second;
  ASSERT_EQ(M.rows(), 1u);
  EXPECT_EQ(M(0, 0), Scalar(1));
}
