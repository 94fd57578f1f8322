#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgmorse/algebra.hpp"

namespace dgm {

struct CriticalPoint {
  std::string name;
  int index = 0;
};

struct CriticalBasis {
  std::vector<CriticalPoint> points;
  int ambient_dim = 0;

  std::size_t size() const { return points.size(); }
  int index(int i) const { return points[i].index; }
  const std::string& name(int i) const { return points[i].name; }
  int find(const std::string& n) const {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i].name == n) return static_cast<int>(i);
    fail(ErrorCode::UnresolvedName, "critical point " + n);
  }
  int max_index() const {
    int m = 0;
    for (const auto& p : points) m = std::max(m, p.index);
    return m;
  }
  /// Indices moved by s (shriek-type regrading).
  CriticalBasis shifted(int s) const {
    CriticalBasis c = *this;
    for (auto& p : c.points) p.index += s;
    return c;
  }
};

enum class CocycleKind { Twisting, Continuation, Homotopy, Cohomological };

inline std::string kind_name(CocycleKind k) {
  switch (k) {
    case CocycleKind::Twisting: return "twisting";
    case CocycleKind::Continuation: return "continuation";
    case CocycleKind::Homotopy: return "homotopy";
    case CocycleKind::Cohomological: return "cohomological";
  }
  return "?";
}

/// Degree offset of the entries: |m_xy| = |x| - |y| + offset.
inline int kind_offset(CocycleKind k) {
  switch (k) {
    case CocycleKind::Twisting: return -1;
    case CocycleKind::Continuation: return 0;
    case CocycleKind::Homotopy: return 1;
    case CocycleKind::Cohomological: return -1;  // |m_{x∨,y∨}| = |y∨| - |x∨| - 1, checked separately
  }
  return 0;
}

/// (x, y) -> algebra element, rows from one critical basis and columns from
/// another (the same one for twisting cocycles).
struct CocycleMatrix {
  std::string name;
  CocycleKind kind = CocycleKind::Twisting;
  std::map<std::pair<int, int>, AlgebraElement> entries;

  AlgebraElement at(int x, int y) const {
    auto it = entries.find({x, y});
    return it == entries.end() ? AlgebraElement{} : it->second;
  }
  void set(int x, int y, AlgebraElement a) {
    if (a.is_zero())
      entries.erase({x, y});
    else
      entries[{x, y}] = std::move(a);
  }
};

/// Entry degrees must match the declared kind; twisting entries vanish unless |x| > |y|.
inline ValidationReport check_cocycle_degrees(const DGA& R, const CriticalBasis& rows, const CriticalBasis& cols, const CocycleMatrix& m) {
  ValidationReport rep;
  for (const auto& [k, v] : m.entries) {
    auto d = R.degree(v);
    if (!d) continue;
    int expected = m.kind == CocycleKind::Cohomological ? cols.index(k.second) - rows.index(k.first) - 1
                                                        : rows.index(k.first) - cols.index(k.second) + kind_offset(m.kind);
    if (*d != expected)
      rep.add(m.name + "(" + rows.name(k.first) + ", " + cols.name(k.second) + ") has degree " + std::to_string(*d) +
              ", expected " + std::to_string(expected));
  }
  return rep;
}

}  // namespace dgm
