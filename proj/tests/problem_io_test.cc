#include "exactsdp/problem_io.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace exactsdp {
namespace {

using testing::V;

constexpr const char* kMinimal = R"({
  "schema_version": 1,
  "n": 2,
  "Q": ["1", "0", "-1"],
  "H": [["1", "0"], ["0", "1"]],
  "constraints": [{"kind": "explicit", "matrix": ["1", "2", "1"]}]
})";

std::string ParsePath(const std::string& text) {
  try {
    ParseProblem(text);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(ParseProblem, MinimalDocument) {
  const ProblemDocument d = ParseProblem(kMinimal);
  const GeoCop& p = d.problem;
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(p.q.packed(), SymMat::Diagonal({1, -1}).packed());
  EXPECT_EQ(p.h.packed(), SymMat::Identity(2).packed());
  ASSERT_EQ(p.bset.size(), 1u);
  EXPECT_EQ(p.bset.members[0].packed(), testing::ExampleC2().packed());
  EXPECT_NO_THROW(p.Validate());
  EXPECT_EQ(d.options.tol, 1e-8);
  EXPECT_EQ(d.options.seed, 0u);
}

TEST(ParseProblem, BallFamilyWithBox) {
  const ProblemDocument d = ParseProblem(R"({
    "n": 3, "Q": ["1","0","0","1","0","0"], "H": ["0","0","0","0","0","1"],
    "constraints": [{"kind": "ball_grid", "radius": "1/2", "box": {"lo": "-2", "hi": "2"}}]
  })");
  ASSERT_EQ(d.problem.bset.size(), 25u);
  // Each member is ||u - t||^2 - 1/4 for a lattice point t.
  int found = 0;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const SymMat want = BallMatrix(V({double(a), double(b)}), 0.5);
      for (const SymMat& m : d.problem.bset.members) found += m.packed() == want.packed();
    }
  }
  EXPECT_EQ(found, 25);
}

TEST(ParseProblem, ErrorPaths) {
  EXPECT_EQ(ParsePath(R"({"n": 2, "Q": ["1","0","1"]})"), "$.H");
  EXPECT_EQ(ParsePath(R"({"Q": ["1"], "H": ["1"]})"), "$.n");
  EXPECT_EQ(ParsePath(R"({"n": 2, "Q": ["1","0"], "H": ["1","0","1"]})"), "$.Q");
  EXPECT_EQ(ParsePath(R"({"n": 2, "Q": ["1","0","x"], "H": ["1","0","1"]})"), "$.Q[2]");
  EXPECT_EQ(ParsePath(R"({"n": 2, "Q": [["1","2"],["3","1"]], "H": ["1","0","1"]})"), "$.Q[1][0]");
  EXPECT_EQ(ParsePath(R"({"n": 2, "Q": ["1","0","1"], "H": ["1","0","1"],
                          "constraints": [{"kind": "explicit", "matrix": ["1","0","1"]},
                                          {"kind": "ball_grid"}]})"),
            "$.constraints[1].radius");
  EXPECT_EQ(ParsePath(R"({"n": 3, "Q": ["1","0","0","1","0","1"], "H": ["1","0","0","1","0","1"],
                          "constraints": [{"kind": "spiral"}]})"),
            "$.constraints[0].kind");
  EXPECT_EQ(ParsePath(R"({"n": 2, "Q": ["1","0","1"], "H": ["1","0","1"], "schema_version": 7})"),
            "$.schema_version");
  EXPECT_EQ(ParsePath("[1, 2"), "$");
  EXPECT_EQ(ParsePath(R"({"n": 3, "Q": ["1","0","0","1","0","1"], "H": ["1","0","0","1","0","1"],
                          "constraints": [{"kind": "hyperbola_seq", "breakpoints": ["0","2","1"],
                                           "r_squared": "0.5"}]})"),
            "$.constraints[0]");
}

TEST(ParseNumber, Forms) {
  EXPECT_EQ(ParseNumber(Json("-0.5"), "$"), -0.5);
  EXPECT_EQ(ParseNumber(Json("1/4"), "$"), 0.25);
  EXPECT_EQ(ParseNumber(Json("1e-8"), "$"), 1e-8);
  EXPECT_EQ(ParseNumber(Json(3), "$"), 3.0);
  EXPECT_EQ(ParseNumber(Json("1/3"), "$"), 1.0 / 3.0);
  EXPECT_THROW(ParseNumber(Json("1/0"), "$"), ParseError);
  EXPECT_THROW(ParseNumber(Json("abc"), "$"), ParseError);
  EXPECT_THROW(ParseNumber(Json("1.5x"), "$"), ParseError);
  EXPECT_THROW(ParseNumber(Json(true), "$"), ParseError);
}

TEST(DecimalString, RoundTripsExactly) {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> nd(0.0, 1e3);
  for (int t = 0; t < 2000; ++t) {
    const double v = nd(rng) * std::pow(10.0, t % 21 - 10);
    EXPECT_EQ(std::strtod(DecimalString(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(DecimalString(-0.5), "-0.5");
  EXPECT_EQ(DecimalString(0.25), "0.25");
  EXPECT_EQ(DecimalString(0.0), "0");
}

// parse -> serialize -> parse is the identity on the realized problem, and
// the canonical text is a fixed point.
TEST(SerializeProblem, RoundTrip) {
  const std::vector<std::string> docs = {
      kMinimal,
      R"({"n": 3, "Q": ["1","0","0","1","0","0"], "H": ["0","0","0","0","0","1"],
          "constraints": [{"kind": "hyperbola_seq", "breakpoints": ["0","1","2","4"], "r_squared": "0.5"}],
          "options": {"tol": "1e-7", "seed": 5}})",
      R"({"n": 3, "Q": ["0.1","0.2","0.3","0.4","0.5","0.6"], "H": ["1","0","0","1","0","1"],
          "constraints": [{"kind": "parabola_set", "members": [{"lambdas": ["16","1"]}, {"lambdas": ["1","16"], "sign": -1}]}],
          "congruence": [["1","0"],["0","1"],["1","1"]]})"};
  for (const std::string& text : docs) {
    const ProblemDocument a = ParseProblem(text);
    const std::string canon = SerializeProblem(a).dump();
    const ProblemDocument b = ParseProblem(canon);
    EXPECT_EQ(b.problem.n, a.problem.n);
    EXPECT_EQ(b.problem.q.packed(), a.problem.q.packed());
    EXPECT_EQ(b.problem.h.packed(), a.problem.h.packed());
    ASSERT_EQ(b.problem.bset.size(), a.problem.bset.size());
    for (std::size_t k = 0; k < a.problem.bset.size(); ++k) {
      EXPECT_EQ(b.problem.bset.members[k].packed(), a.problem.bset.members[k].packed());
    }
    EXPECT_EQ(b.problem.congruence.has_value(), a.problem.congruence.has_value());
    if (a.problem.congruence) EXPECT_EQ(*b.problem.congruence, *a.problem.congruence);
    EXPECT_EQ(b.options.tol, a.options.tol);
    EXPECT_EQ(b.options.seed, a.options.seed);
    EXPECT_EQ(SerializeProblem(b).dump(), canon);
  }
}

TEST(SerializeProblem, RandomMatricesRoundTrip) {
  std::mt19937_64 rng(72);
  for (int t = 0; t < 50; ++t) {
    ProblemDocument d;
    const int n = 1 + t % 6;
    d.problem.n = n;
    d.problem.q = testing::RandomSym(rng, n, 1e3);
    d.problem.h = SymMat::Identity(n);
    d.problem.bset = testing::Set(n, {testing::RandomSym(rng, n), testing::RandomSym(rng, n, 1e-5)});
    const ProblemDocument b = ParseProblem(SerializeProblem(d).dump());
    EXPECT_EQ(b.problem.q.packed(), d.problem.q.packed());
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(b.problem.bset.members[k].packed(), d.problem.bset.members[k].packed());
    }
  }
}

TEST(ToJson, NumbersAreDecimalStrings) {
  const Json m = ToJson(SymMat::FromRows({{1, -0.5}, {-0.5, 0.25}}));
  EXPECT_EQ(m.dump(), R"([["1","-0.5"],["-0.5","0.25"]])");
  const Json v = ToJson(V({0.1, 2}));
  EXPECT_EQ(v.dump(), R"(["0.1","2"])");
}

}  // namespace
}  // namespace exactsdp
