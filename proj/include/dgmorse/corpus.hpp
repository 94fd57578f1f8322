#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgmorse/bundle.hpp"
#include "dgmorse/fixtures_data.hpp"
#include "dgmorse/report.hpp"

namespace dgm {

inline std::vector<std::string> example_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : fixtures::embedded) out.emplace_back(name);
  return out;
}

inline std::string example_text(const std::string& name) {
  for (const auto& [n, text] : fixtures::embedded)
    if (n == name) return std::string(text);
  fail(ErrorCode::UnknownExample, "no example named '" + name + "'");
}

/// Parsed and re-validated; stored cocycles are not taken on trust.
inline Bundle load_example(const std::string& name) {
  Bundle b = parse_bundle(example_text(name));
  auto rep = validate_bundle(b);
  if (!rep.ok()) fail(ErrorCode::SchemaViolation, "example " + name + " does not validate: " + rep.issues.front());
  return b;
}

/// Declared expectations for one coefficient system, keyed by degree.
inline std::map<int, std::string> expected_homology(const Bundle& b, const std::string& tag) {
  (void)b.coeff(tag);
  std::map<int, std::string> out;
  for (const auto& e : b.expects)
    if (e.tag == tag) out[e.degree] = e.value;
  return out;
}

}  // namespace dgm
