#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using dgm::cli::run_command;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int c = run_command(args, out, err);
  return {c, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(DGMORSE_FIXTURE_DIR) + "/" + name + ".bundle"; }

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::string temp_file(const std::string& name, const std::string& text) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, ValidateCorpus) {
  for (const auto& n : dgm::example_names()) {
    auto r = run({"validate", fixture(n)});
    EXPECT_EQ(r.code, 0) << n << "\n" << r.out << r.err;
  }
}

TEST(Cli, HopfHomology) {
  auto r = run({"homology", "example:hopf", "--coeff", "fiber"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "H_0 = Z  [matches expectation]")) << r.out;
  EXPECT_TRUE(contains(r.out, "H_1 = 0")) << r.out;
  EXPECT_TRUE(contains(r.out, "H_3 = Z  [matches expectation]")) << r.out;
}

TEST(Cli, TorusGroupRingIsRefused) {
  auto r = run({"homology", fixture("torus2"), "--coeff", "group-ring"});
  EXPECT_EQ(r.code, 4);
  EXPECT_TRUE(contains(r.err, "unsupported ring ℤ[ℤ²]")) << r.err;
}

TEST(Cli, FieldRequiredIsRefusal) {
  auto r = run({"ss", "example:circle", "--coeff", "trivial", "--field", "Z"});
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"homology"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--format", "xml", "examples"}).code, 1);
}

TEST(Cli, ParseErrorExitCode) {
  auto bad = temp_file("bad.bundle", "bundle bad\ndim x\n");
  auto r = run({"validate", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "line 2")) << r.err;
  EXPECT_EQ(run({"validate", temp_file("empty.bundle", "")}).code, 2);
  EXPECT_EQ(run({"validate", "/nonexistent/x.bundle"}).code, 2);
}

TEST(Cli, ValidationFailureExitCode) {
  // flip the twisting entry so the cochain-level check fails
  std::string text = dgm::example_text("rp2");
  text.replace(text.find("entry a min = 1 - g"), 19, "entry a min = 1 + g");
  auto r = run({"validate", temp_file("rp2bad.bundle", text)});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST(Cli, StructuredOutputIsJson) {
  auto r = run({"--format", "structured", "homology", "example:rp2", "--coeff", "sign"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["bundle"], "rp2");
  const auto& deg = j["results"][0]["degrees"];
  EXPECT_EQ(deg[0]["group"], "Z/2");
  EXPECT_EQ(deg[2]["free_rank"], 1);
}

TEST(Cli, ExamplesListingAndText) {
  auto r = run({"examples"});
  EXPECT_EQ(r.code, 0);
  for (const auto& n : dgm::example_names()) EXPECT_TRUE(contains(r.out, n + "  ")) << n;
  auto t = run({"examples", "klein"});
  EXPECT_EQ(t.out, dgm::example_text("klein"));
  EXPECT_EQ(run({"examples", "mobius"}).code, 3);
}

TEST(Cli, FmtIsCanonical) {
  for (const auto& n : dgm::example_names()) {
    auto r = run({"fmt", fixture(n)});
    EXPECT_EQ(r.out, dgm::example_text(n)) << n;
  }
}

TEST(Cli, ReportsAreDeterministic) {
  for (const auto& n : dgm::example_names()) {
    for (std::vector<std::string> cmd : {std::vector<std::string>{"homology"}, {"map-check"}, {"duality"}, {"validate"}}) {
      cmd.push_back("example:" + n);
      auto a = run(cmd), b = run(cmd);
      EXPECT_EQ(a.out, b.out) << n << " " << cmd[0];
      EXPECT_EQ(a.code, b.code) << n << " " << cmd[0];
    }
  }
}

TEST(Cli, MapCheckAndDuality) {
  auto m = run({"map-check", "example:circle-deg2-selfmap"});
  EXPECT_EQ(m.code, 0) << m.err;
  auto d = run({"duality", "example:klein-pd-pair"});
  EXPECT_EQ(d.code, 0) << d.err;
  EXPECT_TRUE(contains(d.out, "yes")) << d.out;
}
