#pragma once
// Small conveniences shared by the unit tests.

#include <string>

#include "dgmorse/bundle.hpp"
#include "dgmorse/expr.hpp"
#include "oracles.hpp"

namespace testing_support {

inline dgm::AlgebraElement alg(const dgm::DGA& R, const std::string& s) {
  dgm::ExprParser p(s, {1, 1});
  return dgm::ExprEvaluator(R, nullptr, 1, false).algebra(p.parse());
}

inline dgm::ModuleElement mod(const dgm::DGA& R, const dgm::DGModule& F, const std::string& s) {
  dgm::ExprParser p(s, {1, 1});
  return dgm::ExprEvaluator(R, &F, 1, false).module(p.parse());
}

inline oracle::IntMat ints(const dgm::Matrix& m) {
  oracle::IntMat a(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = std::get<dgm::Integer>(m(i, j).value());
  return a;
}

/// Oracle homology of an integral complex, degrees lo..hi.
inline std::vector<oracle::Homology> oracle_homology(const dgm::ChainComplex& X) {
  std::vector<std::size_t> dims;
  std::vector<oracle::IntMat> d;
  for (int k = X.min_degree(); k <= X.max_degree(); ++k) {
    dims.push_back(X.rank(k));
    d.push_back(k == X.min_degree() ? oracle::IntMat{} : ints(X.d(k)));
  }
  return oracle::integral_homology(dims, d);
}

inline oracle::Homology group_of(const dgm::HomologyResult& H, int k) {
  oracle::Homology h;
  h.free = H.at(k).free_rank;
  for (const auto& t : H.at(k).torsion) h.torsion.push_back(std::get<dgm::Integer>(t.value()));
  return h;
}

}  // namespace testing_support
