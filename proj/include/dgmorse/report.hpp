#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgmorse/bundle.hpp"
#include "dgmorse/spectral.hpp"

namespace dgm {

// ---------------------------------------------------------------------------
// Coefficient systems

struct CoeffResult {
  std::string tag;
  Route route = Route::Twisted;
  ChainComplex X;
  HomologyResult H;
  bool cohomological = false;
  // regular module over a cut-off algebra: degrees above this see the cut
  std::optional<int> certified_top;

  /// Degree k read in the coefficient's own grading (cohomological for cochains).
  std::string describe(int k) const { return H.describe(cohomological ? -k : k); }
  int lo() const { return cohomological ? -X.max_degree() : X.min_degree(); }
  int hi() const {
    int h = cohomological ? -X.min_degree() : X.max_degree();
    return certified_top ? std::min(h, *certified_top) : h;
  }
};

/// True when some in-window basis product would land above the window.
inline bool window_truncates(const DGA& R) {
  int top = 0;
  for (std::size_t g = 0; g < R.basis.size(); ++g) top = std::max(top, R.basis.degree(static_cast<int>(g)));
  return top > 0 && 2 * top > R.basis.dmax;
}

inline ChainComplex coeff_complex(const Bundle& b, const CoeffDecl& c, const ScalarContext& scalars) {
  const DGA& R = b.algebra();
  const CocycleDecl& m = b.cocycle(c.cocycle);
  switch (c.route) {
    case Route::Twisted:
      if (m.m.kind != CocycleKind::Twisting) fail(ErrorCode::SchemaViolation, c.cocycle + " is not a twisting cocycle");
      return build_twisted_complex(b.module(c.module), R, m.row_basis, m.m, scalars);
    case Route::Local:
      return local_coefficient_complex(b.module(c.module), R, lifted_complex(m.row_basis, m.m, R), scalars);
    case Route::Lifted: {
      GroupRingComplex L = lifted_complex(m.row_basis, m.m, R);
      if (L.group.kind == Group::Kind::FreeAbelian) {
        if (L.group.rank() >= 2) fail(ErrorCode::UnsupportedRing, "unsupported ring " + L.group.ring_name());
        if (!scalars.is_field()) fail(ErrorCode::UnsupportedRing, "unsupported ring ℤ[ℤ] (integer Laurent polynomials)");
      }
      return local_coefficient_complex(group_ring_module(R), R, L, scalars);
    }
    case Route::Cochain: {
      if (m.m.kind != CocycleKind::Cohomological) fail(ErrorCode::SchemaViolation, c.cocycle + " is not a cohomological cocycle");
      const DGModule& F = b.module(c.module);
      DGModule Fbar = opposite_grading(c.character.empty() ? F : twist_by_character(F, b.character(c.character), R));
      return build_cochain_complex(Fbar, R, m.row_basis, m.m, scalars);
    }
  }
  fail(ErrorCode::SchemaViolation, "bad route");
}

inline CoeffResult compute_coeff(const Bundle& b, const std::string& tag, std::optional<ScalarContext> scalars = std::nullopt) {
  const CoeffDecl& c = b.coeff(tag);
  CoeffResult r;
  r.tag = tag;
  r.route = c.route;
  r.cohomological = c.route == Route::Cochain;
  r.X = coeff_complex(b, c, scalars ? *scalars : parse_scalars(c.scalars));
  r.H = homology(r.X);
  if (c.route == Route::Twisted && b.modules.at(c.module).directive == "regular" && window_truncates(b.algebra())) {
    const CriticalBasis& C = b.cocycle(c.cocycle).row_basis;
    int lowest = C.max_index();
    for (std::size_t i = 0; i < C.size(); ++i) lowest = std::min(lowest, C.index(static_cast<int>(i)));
    // H_k needs every generator of degree k+1 present
    r.certified_top = b.algebra().basis.dmax + lowest - 1;
  }
  return r;
}

/// Pages for a coefficient system over a field (the filtration is by index).
inline SpectralSequence compute_coeff_pages(const Bundle& b, const std::string& tag, int r_max, const ScalarContext& field) {
  const CoeffDecl& c = b.coeff(tag);
  if (!field.is_field()) fail(ErrorCode::FieldRequired, "spectral sequence pages need a field, got " + field.name());
  if (c.route != Route::Twisted) fail(ErrorCode::SchemaViolation, "pages are computed for twisted coefficient systems");
  return compute_pages(coeff_complex(b, c, field), r_max);
}

// ---------------------------------------------------------------------------
// Maps

struct MapResult {
  std::string name, kind;
  std::vector<std::shared_ptr<ChainComplex>> keep;
  ChainMap f;
  std::optional<ChainHomotopy> homotopy;
  std::vector<std::shared_ptr<ChainMap>> keep_maps;
  HomologyResult Hs, Ht;
  std::map<int, Matrix> induced;
  bool iso = false;
  std::optional<bool> lifted_invertible;
};

namespace detail {

inline void finish_map(MapResult& r) {
  r.f.certify();
  r.Hs = homology(*r.f.source);
  r.Ht = homology(*r.f.target);
  r.induced = induced_on_homology(r.f, r.Hs, r.Ht);
  r.iso = induced_is_isomorphism(r.induced, r.Hs, r.Ht);
}

inline bool same_complex(const ChainComplex& a, const ChainComplex& b) {
  if (!(a.ctx == b.ctx) || a.labels != b.labels) return false;
  for (int k = std::min(a.min_degree(), b.min_degree()); k <= std::max(a.max_degree(), b.max_degree()); ++k)
    if (!(a.d(k) == b.d(k))) return false;
  return true;
}

inline void throw_first(ErrorCode code, const std::string& what, const Diagnostic& d) {
  if (!d.notes.empty()) fail(code, what + ": " + d.notes.front());
  if (!d.failures.empty())
    fail(code, what + " fails at (" + d.failures.front().row + ", " + d.failures.front().col + "), residual " + d.failures.front().residual);
}

}  // namespace detail

inline MapResult build_map(const Bundle& b, const std::string& name) {
  const DGA& R = b.algebra();
  const MapDecl& d = Bundle::lookup(b.maps, name, "map");
  const ScalarContext scalars = parse_scalars(d.scalars);
  MapResult r;
  r.name = name;
  auto twisted = [&](const DGModule& F, const CriticalBasis& C, const CocycleMatrix& m) {
    auto X = std::make_shared<ChainComplex>(build_twisted_complex(F, R, C, m, scalars));
    r.keep.push_back(X);
    return X;
  };

  if (!d.cocycle.empty()) {
    const CocycleDecl& nu = b.cocycle(d.cocycle);
    const DGModule& F = b.module(d.module);
    if (nu.m.kind == CocycleKind::Continuation) {
      r.kind = nu.shift != 0 ? "shriek" : "continuation";
      const CocycleDecl& m0 = b.cocycle(nu.from);
      const CocycleDecl& m1 = b.cocycle(nu.to);
      detail::throw_first(ErrorCode::NotAChainMap, "continuation equation",
                          check_continuation_cocycle(R, nu.row_basis, nu.col_basis, m0.m, m1.m, nu.m));
      auto X0 = twisted(F, nu.row_basis, m0.m);
      auto X1 = twisted(F, nu.col_basis, m1.m);
      r.f = induce_chain_map(nu.m, F, R, nu.row_basis, nu.col_basis, *X0, *X1);
      if (R.group_kind != DGA::GroupKind::None && R.group().is_abelian())
        r.lifted_invertible = lifted_map_invertible(lifted_map(nu.m, R, nu.row_basis, nu.col_basis), R.group());
    } else if (nu.m.kind == CocycleKind::Homotopy) {
      r.kind = "homotopy";
      const CocycleDecl& n0 = b.cocycle(nu.from);
      const CocycleDecl& n1 = b.cocycle(nu.to);
      const CocycleDecl& m0 = b.cocycle(n0.from);
      const CocycleDecl& m1 = b.cocycle(n0.to);
      detail::throw_first(ErrorCode::NotAHomotopy, "homotopy equation",
                          check_homotopy_cocycle(R, nu.row_basis, nu.col_basis, m0.m, m1.m, n0.m, n1.m, nu.m));
      auto X0 = twisted(F, nu.row_basis, m0.m);
      auto X1 = twisted(F, nu.col_basis, m1.m);
      auto f0 = std::make_shared<ChainMap>(induce_chain_map(n0.m, F, R, nu.row_basis, nu.col_basis, *X0, *X1));
      auto f1 = std::make_shared<ChainMap>(induce_chain_map(n1.m, F, R, nu.row_basis, nu.col_basis, *X0, *X1));
      r.keep_maps = {f0, f1};
      r.homotopy = induce_homotopy(nu.m, F, R, nu.row_basis, nu.col_basis, *f0, *f1);
      r.f = *f1;
    } else {
      fail(ErrorCode::SchemaViolation, d.cocycle + " is neither a continuation nor a homotopy cocycle");
    }
  } else if (!d.modmap.empty()) {
    r.kind = "module";
    const ModMapDecl& g = Bundle::lookup(b.modmaps, d.modmap, "modmap");
    const CocycleDecl& m = b.cocycle(d.over);
    g.map.validate(R);
    auto X0 = twisted(*g.map.source, m.row_basis, m.m);
    auto X1 = twisted(*g.map.target, m.row_basis, m.m);
    r.f = module_morphism_chain_map(g.map, R, m.row_basis, *X0, *X1);
  } else {
    r.kind = "composite";
    auto a = std::make_shared<MapResult>(build_map(b, d.first));
    auto c = std::make_shared<MapResult>(build_map(b, d.second));
    if (!detail::same_complex(*a->f.target, *c->f.source))
      fail(ErrorCode::NotAChainMap, "target of " + d.first + " is not the source of " + d.second);
    r.keep = a->keep;
    r.keep.insert(r.keep.end(), c->keep.begin(), c->keep.end());
    r.f = c->f.compose_after(a->f);
    r.f.source = a->f.source;
  }
  detail::finish_map(r);
  return r;
}

// ---------------------------------------------------------------------------
// Duality

inline DualityResult compute_pairing(const Bundle& b, const std::string& name) {
  const DGA& R = b.algebra();
  const PairingDecl& p = Bundle::lookup(b.pairings, name, "pairing");
  const CocycleDecl& hom = b.cocycle(p.homological);
  const CocycleDecl& dual = b.cocycle(p.cochain);
  const CriticalBasis& C = dual.row_basis;
  const CriticalBasis& Cn = hom.row_basis;
  // homological entries re-keyed by point name into C's order
  CocycleMatrix m_neg;
  m_neg.name = hom.m.name;
  for (int x = 0; x < static_cast<int>(Cn.size()); ++x) {
    int i = C.find(Cn.name(x));
    if (Cn.index(x) != C.ambient_dim - C.index(i))
      fail(ErrorCode::PairingMismatch, "point " + Cn.name(x) + " has index " + std::to_string(Cn.index(x)) + " for -f, expected " +
                                           std::to_string(C.ambient_dim - C.index(i)));
  }
  if (Cn.size() != C.size()) fail(ErrorCode::PairingMismatch, "critical sets of f and -f differ in size");
  for (const auto& [k, v] : hom.m.entries) m_neg.set(C.find(Cn.name(k.first)), C.find(Cn.name(k.second)), v);
  std::optional<SignCharacter> w;
  if (!p.character.empty()) w = b.character(p.character);
  return poincare_duality_map(b.module(p.module), R, C, m_neg, dual.m, w, parse_scalars(p.scalars));
}

// ---------------------------------------------------------------------------
// Validation

inline ValidationReport validate_bundle(const Bundle& b) {
  ValidationReport rep;
  auto guard = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      rep.add(what + ": " + e.what());
    }
  };
  if (!b.R) {
    rep.add("no dga block");
    return rep;
  }
  const DGA& R = *b.R;
  guard("dga", [&] { rep.merge(validate_dga(R), "dga: "); });
  if (!rep.ok()) return rep;
  for (const auto& [n, m] : b.modules) guard("module " + n, [&] { rep.merge(validate_module(m.module, R), "module " + n + ": "); });
  for (const auto& [n, c] : b.cocycles)
    guard("cocycle " + n, [&] {
      Diagnostic d;
      switch (c.m.kind) {
        case CocycleKind::Twisting: d = check_maurer_cartan(c.row_basis, R, c.m); break;
        case CocycleKind::Cohomological: d = check_cohomological_mc(c.row_basis, R, c.m); break;
        case CocycleKind::Continuation:
          d = check_continuation_cocycle(R, c.row_basis, c.col_basis, b.cocycle(c.from).m, b.cocycle(c.to).m, c.m);
          break;
        case CocycleKind::Homotopy: {
          const auto& n0 = b.cocycle(c.from);
          d = check_homotopy_cocycle(R, c.row_basis, c.col_basis, b.cocycle(n0.from).m, b.cocycle(n0.to).m, n0.m, b.cocycle(c.to).m, c.m);
          break;
        }
      }
      for (const auto& s : d.notes) rep.add("cocycle " + n + ": " + s);
      for (const auto& f : d.failures) rep.add("cocycle " + n + " fails at (" + f.row + ", " + f.col + "), residual " + f.residual);
    });
  for (const auto& [n, phi] : b.morphisms) guard("morphism " + n, [&] { rep.merge(phi.validate(), "morphism " + n + ": "); });
  for (const auto& [n, g] : b.modmaps) guard("modmap " + n, [&] { g.map.validate(R); });
  for (const auto& [n, c] : b.coeffs) guard("coeff " + n, [&] {
      if (c.route == Route::Twisted || c.route == Route::Cochain) (void)coeff_complex(b, c, parse_scalars(c.scalars));
    });
  return rep;
}

}  // namespace dgm
