#include <gtest/gtest.h>

#include <random>

#include "dgmorse/corpus.hpp"
#include "dgmorse/morphisms.hpp"
#include "dgmorse/report.hpp"
#include "support.hpp"

using namespace dgm;
using testing_support::alg;

namespace {

ChainComplex twisted(const Bundle& b, const DGModule& F, const std::string& cocycle, const ScalarContext& s) {
  const auto& m = b.cocycle(cocycle);
  return build_twisted_complex(F, b.algebra(), m.row_basis, m.m, s);
}

CocycleMatrix identity_cocycle(const DGA& R, const CriticalBasis& C) {
  CocycleMatrix nu;
  nu.kind = CocycleKind::Continuation;
  for (int x = 0; x < static_cast<int>(C.size()); ++x) nu.set(x, x, R.one());
  return nu;
}

bool is_identity(const Matrix& M) { return M.rows() == M.cols() && M == Matrix::identity(M.ctx(), M.rows()); }

ModuleMap gen_map(const DGA& R, const DGModule& S, const DGModule& T, const std::map<std::string, std::string>& img) {
  ModuleMap g{"g", &S, &T, {}};
  for (const auto& [from, to] : img)
    g.images[S.basis.index(from)] = to == "0" ? ModuleElement{} : T.gen(R, T.basis.index(to));
  return g;
}

}  // namespace

TEST(Continuation, IdentityCocycle) {
  Bundle b = load_example("circle");
  const auto& m = b.cocycle("m");
  const DGA& R = b.algebra();
  auto nu = identity_cocycle(R, m.row_basis);
  EXPECT_TRUE(check_continuation_cocycle(R, m.row_basis, m.row_basis, m.m, m.m, nu).ok());
  ChainComplex X = twisted(b, b.module("trivial"), "m", ScalarContext::integers());
  ChainMap f = induce_chain_map(nu, b.module("trivial"), R, m.row_basis, m.row_basis, X, X);
  for (int k = X.min_degree(); k <= X.max_degree(); ++k) EXPECT_TRUE(is_identity(f.at(k)));
}

TEST(Continuation, CircleSelfContinuationAndFlip) {
  Bundle b = load_example("circle");
  const auto& nu = b.cocycle("nu");
  const DGA& R = b.algebra();
  const auto& m0 = b.cocycle("m"), &m1 = b.cocycle("m1");
  EXPECT_TRUE(check_continuation_cocycle(R, nu.row_basis, nu.col_basis, m0.m, m1.m, nu.m).ok());
  CocycleMatrix bad = nu.m;
  int mx = nu.row_basis.find("max");
  bad.set(mx, mx, nu.m.at(mx, mx).scaled(Scalar(-1)));
  auto d = check_continuation_cocycle(R, nu.row_basis, nu.col_basis, m0.m, m1.m, bad);
  EXPECT_TRUE(d.names("max", "min"));
}

TEST(Continuation, LaurentSelfMapIsInvertible) {
  Bundle b = load_example("circle");
  MapResult r = build_map(b, "selfcont");
  EXPECT_TRUE(r.iso);
  ASSERT_TRUE(r.lifted_invertible.has_value());
  EXPECT_TRUE(*r.lifted_invertible);
  EXPECT_TRUE(is_quasi_iso(r.f).quasi_iso);
}

TEST(Continuation, ZeroMapIsNotQuasiIso) {
  Bundle b = load_example("circle");
  const auto& m = b.cocycle("m");
  ChainComplex X = twisted(b, b.module("trivial"), "m", ScalarContext::integers());
  CocycleMatrix zero;
  ChainMap f = induce_chain_map(zero, b.module("trivial"), b.algebra(), m.row_basis, m.row_basis, X, X);
  auto v = is_quasi_iso(f);
  EXPECT_FALSE(v.quasi_iso);
  // cone of the zero map on (Z, Z): H_k(X) ⊕ H_{k-1}(X)
  EXPECT_EQ(v.cone_homology.describe(0), "Z");
  EXPECT_EQ(v.cone_homology.describe(1), "Z^2");
  EXPECT_EQ(v.cone_homology.describe(2), "Z");
}

TEST(QuasiIso, ZeroMapBetweenAcyclics) {
  Bundle b = load_example("circle");
  ChainComplex X = twisted(b, b.module("trivial"), "m", ScalarContext::integers());
  ChainMap id{&X, &X, {}};
  for (int k = X.min_degree(); k <= X.max_degree(); ++k) id.maps[k] = Matrix::identity(X.ctx, X.rank(k));
  EXPECT_TRUE(is_quasi_iso(id).quasi_iso);
  ChainComplex A = mapping_cone(id);
  ChainMap zero{&A, &A, {}};
  zero.certify();
  EXPECT_TRUE(is_quasi_iso(zero).quasi_iso);
}

TEST(Homotopy, ZeroHomotopy) {
  Bundle b = load_example("circle");
  const auto& nu = b.cocycle("nu");
  CocycleMatrix h;
  h.kind = CocycleKind::Homotopy;
  EXPECT_TRUE(check_homotopy_cocycle(b.algebra(), nu.row_basis, nu.col_basis, b.cocycle("m").m, b.cocycle("m1").m, nu.m,
                                     nu.m, h)
                  .ok());
}

TEST(Homotopy, CorpusPairAgreesOnHomology) {
  Bundle b = load_example("circle");
  MapResult r = build_map(b, "homotopic");
  ASSERT_TRUE(r.homotopy.has_value());
  const ChainMap& f0 = *r.keep_maps[0];
  const ChainMap& f1 = *r.keep_maps[1];
  auto i0 = induced_on_homology(f0, r.Hs, r.Ht), i1 = induced_on_homology(f1, r.Hs, r.Ht);
  EXPECT_EQ(i0.size(), i1.size());
  for (const auto& [k, M] : i0) EXPECT_EQ(M, i1.at(k)) << k;
}

TEST(Homotopy, FuzzedBoundariesAreValid) {
  // On the circle, h has a single admissible entry h_{min,max} = p. With m = 1 - t and
  // m' = t^-1 - 1 the equation forces nu1_{max,max} = nu0_{max,max} + (1 - t) p and
  // nu1_{min,min} = nu0_{min,min} + p (t^-1 - 1).
  Bundle b = load_example("circle");
  const DGA& R = b.algebra();
  const auto& nu0 = b.cocycle("nu");
  const auto& C0 = nu0.row_basis;
  const auto& C1 = nu0.col_basis;
  int mx0 = C0.find("max"), mn0 = C0.find("min"), mx1 = C1.find("max"), mn1 = C1.find("min");
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coef(-5, 5), ex(-3, 3);
  auto Q = ScalarContext::rationals();
  ChainComplex X0 = twisted(b, b.module("laurent"), "m", Q), X1 = twisted(b, b.module("laurent"), "m1", Q);
  for (int trial = 0; trial < 50; ++trial) {
    AlgebraElement p;
    for (int i = 0; i < 3; ++i) p.add(R.var_power(0, ex(rng)).terms.begin()->first, Scalar(coef(rng)));
    CocycleMatrix h;
    h.kind = CocycleKind::Homotopy;
    h.set(mn0, mx1, p);
    CocycleMatrix nu1 = nu0.m;
    nu1.set(mx0, mx1, nu0.m.at(mx0, mx1).plus(R.mul(alg(R, "1 - t"), p)));
    nu1.set(mn0, mn1, nu0.m.at(mn0, mn1).plus(R.mul(p, alg(R, "t^-1 - 1"))));
    const auto& m0 = b.cocycle("m").m;
    const auto& m1 = b.cocycle("m1").m;
    ASSERT_TRUE(check_continuation_cocycle(R, C0, C1, m0, m1, nu1).ok());
    ASSERT_TRUE(check_homotopy_cocycle(R, C0, C1, m0, m1, nu0.m, nu1, h).ok());
    ChainMap f0 = induce_chain_map(nu0.m, b.module("laurent"), R, C0, C1, X0, X1);
    ChainMap f1 = induce_chain_map(nu1, b.module("laurent"), R, C0, C1, X0, X1);
    EXPECT_NO_THROW(induce_homotopy(h, b.module("laurent"), R, C0, C1, f0, f1));
    // a wrong homotopy is rejected at matrix level
    CocycleMatrix h2;
    h2.set(mn0, mx1, p.plus(R.one()));
    EXPECT_THROW(induce_homotopy(h2, b.module("laurent"), R, C0, C1, f0, f1), Error);
  }
}

TEST(Pushforward, IdentityAndDegreeTwo) {
  Bundle b = load_example("circle-deg2-selfmap");
  const DGA& R = b.algebra();
  const auto& m = b.cocycle("m");
  DGAMorphism id{&R, &R, {}, {R.var_power(0, 1)}, {R.var_power(0, -1)}};
  EXPECT_EQ(pushforward_cocycle(id, m.m, m.row_basis).entries, m.m.entries);
  const auto& phi = b.morphisms.at("phi");
  CocycleMatrix pushed = pushforward_cocycle(phi, m.m, m.row_basis);
  int mx = m.row_basis.find("max"), mn = m.row_basis.find("min");
  EXPECT_EQ(pushed.at(mx, mn), alg(R, "1 - t^2"));
  EXPECT_EQ(b.cocycle("mpush").m.at(mx, mn), alg(R, "1 - t^2"));
}

TEST(Pushforward, LaurentToFiniteGroupMatchesPullback) {
  Bundle circle = load_example("circle");
  Bundle rp2 = load_example("rp2");
  const DGA& S = circle.algebra();
  const DGA& T = rp2.algebra();
  DGAMorphism phi{&S, &T, {}, {alg(T, "g")}, {alg(T, "g")}};
  const auto& m = circle.cocycle("m");
  CocycleMatrix pushed = pushforward_cocycle(phi, m.m, m.row_basis);
  EXPECT_EQ(pushed.at(m.row_basis.find("max"), m.row_basis.find("min")), alg(T, "1 - g"));
  // pushforward cocycle with the sign module == original cocycle with the pulled-back module
  auto Z = ScalarContext::integers();
  ChainComplex A = build_twisted_complex(rp2.module("sign"), T, m.row_basis, pushed, Z);
  ChainComplex B = build_twisted_complex(pullback_module(rp2.module("sign"), phi), S, m.row_basis, m.m, Z);
  for (int k = A.min_degree(); k <= A.max_degree(); ++k) EXPECT_EQ(A.d(k), B.d(k)) << k;
  EXPECT_EQ(homology(A).describe(0), "Z/2");
}

TEST(ModuleMorphism, IdentityZeroAndProjection) {
  Bundle b = load_example("hopf");
  const DGA& R = b.algebra();
  const DGModule& F = b.module("fiber");
  const DGModule& T = b.module("trivial");
  const auto& m = b.cocycle("m");
  auto Z = ScalarContext::integers();
  ChainComplex XF = twisted(b, F, "m", Z), XT = twisted(b, T, "m", Z);

  ChainMap id = module_morphism_chain_map(gen_map(R, F, F, {{"e0", "e0"}, {"e1", "e1"}}), R, m.row_basis, XF, XF);
  for (int k = XF.min_degree(); k <= XF.max_degree(); ++k) EXPECT_TRUE(is_identity(id.at(k)));

  ChainMap zero = module_morphism_chain_map(gen_map(R, F, F, {}), R, m.row_basis, XF, XF);
  for (const auto& [k, M] : zero.maps) EXPECT_TRUE(M.is_zero());

  // F -> H_0(F): e0 -> z, e1 -> 0; an isomorphism on H_0
  ChainMap pi = module_morphism_chain_map(gen_map(R, F, T, {{"e0", "z"}}), R, m.row_basis, XF, XT);
  auto Hs = homology(XF), Ht = homology(XT);
  auto ind = induced_on_homology(pi, Hs, Ht);
  EXPECT_TRUE(is_module_isomorphism(ind.at(0), Hs.at(0).orders, Ht.at(0).orders));

  EXPECT_THROW(module_morphism_chain_map(gen_map(R, F, F, {{"e0", "e0"}}), R, m.row_basis, XF, XF), Error);
}

TEST(Shriek, Reindex) {
  Bundle b = load_example("sphere2");
  ChainComplex X = twisted(b, b.module("trivial"), "m", ScalarContext::integers());
  ChainComplex same = shriek_reindex(X, 2, 2);
  EXPECT_EQ(same.min_degree(), X.min_degree());
  EXPECT_EQ(same.max_degree(), X.max_degree());
  ChainComplex moved = shriek_reindex(X, 0, 2);
  EXPECT_EQ(moved.min_degree(), X.min_degree() - 2);
  EXPECT_EQ(moved.max_degree(), X.max_degree() - 2);
  MapResult r = build_map(b, "collapse");
  EXPECT_EQ(r.kind, "shriek");
  // top class of S^2 goes to the point class
  ASSERT_EQ(r.induced.at(0).rows(), 1u);
  EXPECT_TRUE(r.induced.at(0)(0, 0) == Scalar(1) || r.induced.at(0)(0, 0) == Scalar(-1));
}

TEST(InducedOnHomology, DegreeTwoSelfMap) {
  Bundle b = load_example("circle-deg2-selfmap");
  MapResult push = build_map(b, "pushf");
  MapResult shriek = build_map(b, "shriek");
  MapResult comp = build_map(b, "composite");
  // cellular chain maps of z -> z^2 on S^1: pushforward is 1 on H_0, 2 on H_1; transfer the reverse
  EXPECT_EQ(push.induced.at(0)(0, 0).to_string(), "1");
  EXPECT_EQ(push.induced.at(1)(0, 0).to_string(), "2");
  EXPECT_EQ(shriek.induced.at(0)(0, 0).to_string(), "2");
  EXPECT_EQ(shriek.induced.at(1)(0, 0).to_string(), "1");
  for (int k : {0, 1}) {
    ASSERT_EQ(comp.induced.at(k).rows(), 1u);
    EXPECT_EQ(comp.induced.at(k)(0, 0).to_string(), "2");
    // functoriality: composite = product of the two factors
    EXPECT_EQ(comp.induced.at(k), shriek.induced.at(k) * push.induced.at(k));
  }
}

TEST(Properties, ConeCriterionAgreesWithInducedMaps) {
  for (const auto& name : example_names()) {
    Bundle b = load_example(name);
    for (const auto& [n, d] : b.maps) {
      MapResult r = build_map(b, n);
      bool cone = is_quasi_iso(r.f).quasi_iso;
      EXPECT_EQ(cone, r.iso) << name << " " << n;
      if (r.lifted_invertible && *r.lifted_invertible) EXPECT_TRUE(cone) << name << " " << n;
    }
  }
}
