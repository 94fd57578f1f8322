#include <gtest/gtest.h>

#include "dgmorse/corpus.hpp"
#include "dgmorse/report.hpp"

using namespace dgm;

namespace {

struct Caught {
  ErrorCode code;
  std::string what;
};

template <class F>
Caught catch_error(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  ADD_FAILURE() << "no error thrown";
  return {ErrorCode::SchemaViolation, ""};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(RoundTrip, EveryFixtureIsByteExact) {
  auto names = example_names();
  ASSERT_EQ(names.size(), 10u);
  for (const auto& name : names) {
    std::string text = example_text(name);
    EXPECT_EQ(render_bundle(parse_bundle(text)), text) << name;
  }
}

TEST(RoundTrip, FileOnDiskMatchesEmbedded) {
  Bundle a = load_bundle_file(std::string(DGMORSE_FIXTURE_DIR) + "/circle.bundle");
  Bundle b = load_example("circle");
  EXPECT_EQ(render_bundle(a), render_bundle(b));
  EXPECT_EQ(a.name, "circle");
  EXPECT_EQ(a.dim, 1);
  EXPECT_EQ(b.cocycle("m").row_basis.size(), 2u);
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  std::string text = example_text("circle");
  text.replace(text.find("dim 1"), 5, "dim one");
  auto c = catch_error([&] { (void)parse_bundle(text); });
  EXPECT_EQ(c.code, ErrorCode::SyntaxError);
  EXPECT_TRUE(contains(c.what, "line 2, col 5")) << c.what;
}

TEST(Parse, UnknownKeyword) {
  auto c = catch_error([] { (void)parse_bundle("bundle x\ndim 1\nfrobnicate\n"); });
  EXPECT_EQ(c.code, ErrorCode::SyntaxError);
  EXPECT_TRUE(contains(c.what, "line 3")) << c.what;
}

TEST(Parse, UnclosedBlock) {
  std::string text = example_text("circle");
  text = text.substr(0, text.find("end\n"));
  EXPECT_EQ(catch_error([&] { (void)parse_bundle(text); }).code, ErrorCode::SyntaxError);
}

TEST(Parse, EmptyDocumentIsSchemaViolation) {
  for (const char* t : {"", "\n\n", "# only a comment\n"}) {
    auto c = catch_error([&] { (void)parse_bundle(t); });
    EXPECT_EQ(c.code, ErrorCode::SchemaViolation);
    EXPECT_TRUE(contains(c.what, "(root)")) << c.what;
  }
}

TEST(Parse, WrongDegreeEntryIsSchemaViolation) {
  // between indices 2 and 0 a twisting entry has degree 1
  std::string text = example_text("hopf");
  auto at = text.find("cocycle m twisting on C");
  ASSERT_NE(at, std::string::npos);
  auto entry = text.find("  entry max min = u", at);
  ASSERT_NE(entry, std::string::npos);
  text.replace(entry, std::string("  entry max min = u").size(), "  entry max min = u2");
  auto c = catch_error([&] { (void)parse_bundle(text); });
  EXPECT_EQ(c.code, ErrorCode::SchemaViolation);
  EXPECT_TRUE(contains(c.what, "m(max, min)")) << c.what;
}

TEST(Parse, UnresolvedNames) {
  std::string text = example_text("circle");
  text.replace(text.find("entry max min"), 13, "entry top min");
  auto c = catch_error([&] { (void)parse_bundle(text); });
  EXPECT_EQ(c.code, ErrorCode::UnresolvedName);
  EXPECT_TRUE(contains(c.what, "top")) << c.what;
}

TEST(Parse, DuplicateDeclaration) {
  std::string text = example_text("rp2");
  auto blk = text.substr(text.find("module trivial"));
  blk = blk.substr(0, blk.find("end\n") + 4);
  text += "\n" + blk;
  EXPECT_EQ(catch_error([&] { (void)parse_bundle(text); }).code, ErrorCode::SyntaxError);
}

TEST(Corpus, UnknownExampleAndTag) {
  EXPECT_EQ(catch_error([] { (void)load_example("mobius"); }).code, ErrorCode::UnknownExample);
  Bundle b = load_example("hopf");
  EXPECT_EQ(catch_error([&] { (void)b.coeff("nope"); }).code, ErrorCode::UnknownTag);
  EXPECT_EQ(catch_error([&] { (void)expected_homology(b, "nope"); }).code, ErrorCode::UnknownTag);
}

TEST(Corpus, ExpectedHomologyIsDeclared) {
  Bundle b = load_example("rp2");
  auto e = expected_homology(b, "group-ring");
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0], "Z");
  EXPECT_EQ(e[1], "0");
  EXPECT_EQ(e[2], "Z");
}

TEST(Corpus, EveryExampleValidates) {
  for (const auto& name : example_names()) {
    auto rep = validate_bundle(load_example(name));
    EXPECT_TRUE(rep.ok()) << name << ": " << (rep.issues.empty() ? "" : rep.issues.front());
  }
}

TEST(Corpus, ComputedHomologyMatchesDeclaredExpectations) {
  for (const auto& name : example_names()) {
    Bundle b = load_example(name);
    for (const auto& [tag, c] : b.coeffs) {
      auto want = expected_homology(b, tag);
      if (want.empty()) continue;
      CoeffResult r = compute_coeff(b, tag);
      for (const auto& [k, v] : want) {
        std::string got = (k >= r.lo() && k <= r.hi()) ? r.describe(k) : "0";
        EXPECT_EQ(got, v) << name << " " << tag << " H_" << k;
      }
    }
  }
}
