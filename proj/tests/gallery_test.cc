#include "exactsdp/gallery.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "exactsdp/certify.h"
#include "exactsdp/exact.h"
#include "test_util.h"

namespace exactsdp {
namespace {

using testing::V;

TEST(Gallery, IdsBuild) {
  const std::vector<std::string> ids = GalleryIds();
  EXPECT_EQ(ids.size(), 13u);
  for (const std::string& id : ids) {
    const GalleryCase c = BuildCase(id);
    EXPECT_EQ(c.id, id);
    EXPECT_NO_THROW(c.problem.Validate()) << id;
    EXPECT_FALSE(c.expected.empty()) << id;
  }
  EXPECT_THROW(BuildCase("ex9.9"), std::invalid_argument);
}

TEST(Gallery, ExampleMatricesAreExact) {
  const GalleryCase c = BuildCase("ex6.1");
  ASSERT_EQ(c.problem.bset.size(), 3u);
  const SymMat& a = c.problem.bset.members[0];
  const SymMat& b = c.problem.bset.members[1];
  const SymMat& cc = c.problem.bset.members[2];
  EXPECT_EQ(a(0, 0), 2.0);
  EXPECT_EQ(a(0, 1), 1.0);
  EXPECT_EQ(b(0, 3), -1.0);
  EXPECT_EQ(cc(2, 2), -3.0);
  EXPECT_EQ(a.packed(), testing::ExampleA4().packed());
  EXPECT_EQ(b.packed(), testing::ExampleB4().packed());
  EXPECT_EQ(cc.packed(), testing::ExampleC4().packed());
}

// The six panel forms against their polynomials.
TEST(Gallery, FigureOneFormsMatchPolynomials) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ud(-3, 3);
  for (double r : {0.5, 1.0}) {
    const std::vector<SymMat> f = FigureOneForms(r);
    ASSERT_EQ(f.size(), 6u);
    for (int t = 0; t < 50; ++t) {
      const double u1 = ud(rng), u2 = ud(rng), z = ud(rng);
      const Eigen::VectorXd x = V({u1, u2, z});
      EXPECT_NEAR(QuadraticForm(f[0], x), u1 * u1 + u2 * u2 - r * z * z, 1e-12);
      EXPECT_NEAR(QuadraticForm(f[1], x), -u1 * u1 + u2 * u2 + z * z, 1e-12);
      EXPECT_NEAR(QuadraticForm(f[2], x), u1 * u1 - u2 * z + z * z, 1e-12);
      EXPECT_NEAR(QuadraticForm(f[3], x), u1 * u1 - u2 * u2, 1e-12);
      EXPECT_NEAR(QuadraticForm(f[4], x), u1 * z + z * z, 1e-12);
      EXPECT_NEAR(QuadraticForm(f[5], x), -u1 * u1 - u2 * u2 + z * z, 1e-12);
    }
  }
}

TEST(Gallery, ComboSubsets) {
  const GalleryCase c = BuildCase("fig1-combos");
  const std::vector<std::vector<int>> expected = {{0, 1, 2}, {0, 5}, {0, 2, 4}, {1, 3}};
  EXPECT_EQ(c.subsets, expected);
}

TEST(Gallery, RingOfDisks) {
  const GalleryCase c = BuildCase("fig2");
  ASSERT_EQ(c.problem.bset.size(), 10u);
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> ud(-2.5, 2.5);
  for (int t = 0; t < 2000; ++t) {
    const Eigen::VectorXd u = V({ud(rng), ud(rng)});
    bool feasible = u.norm() >= 1.0 && u.norm() <= 2.0;
    for (int k = 0; k < 8; ++k) {
      const double a = k * M_PI / 4.0;
      feasible = feasible && (u - V({1.5 * std::cos(a), 1.5 * std::sin(a)})).norm() >= 0.5;
    }
    bool model = true;
    for (const SymMat& b : c.problem.bset.members) model = model && EvalQuadratic(u, 1.0, b) >= 0.0;
    EXPECT_EQ(model, feasible) << u.transpose();
  }
}

TEST(Gallery, HyperbolaMembers) {
  const GalleryCase c = BuildCase("ex6.3");
  ASSERT_EQ(c.problem.bset.size(), 3u);
  const double a[] = {0, 1, 2, 4};
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> ud(-3, 3);
  for (int k = 0; k < 3; ++k) {
    for (int t = 0; t < 20; ++t) {
      const double u1 = ud(rng), u2 = ud(rng), z = ud(rng);
      const double ref = (u2 - a[k] * u1) * (u2 - a[k + 1] * u1) + 0.5 * z * z;
      EXPECT_NEAR(QuadraticForm(c.problem.bset.members[k], V({u1, u2, z})), ref, 1e-12);
    }
  }
}

class GalleryCaseTest : public ::testing::TestWithParam<std::string> {};

TEST_P(GalleryCaseTest, ExpectationsHold) {
  const AcceptanceReport r = RunAcceptance({GetParam()});
  ASSERT_FALSE(r.entries.empty());
  for (const AcceptanceEntry& e : r.entries) {
    EXPECT_TRUE(e.passed) << e.case_id << " " << e.key << ": observed " << e.observed
                          << ", expected " << e.expected;
  }
}

TEST_P(GalleryCaseTest, PipelineRunsWithoutStageErrors) {
  const GalleryCase c = BuildCase(GetParam());
  PipelineVerdict v;
  ASSERT_NO_THROW(v = RunPipeline(c.problem));
  if (v.exactness == Exactness::kCertifiedExact) {
    EXPECT_EQ(v.cert.overall, Overall::kCertified);
    EXPECT_EQ(v.sdp.status, SdpStatus::kOptimal);
  }
  if (v.rank_one.confident) {
    for (const SymMat& b : c.problem.bset.members) {
      EXPECT_GE(QuadraticForm(b, v.lifted_x), -1e-6 * std::max(1.0, b.FrobeniusNorm()));
    }
  }
}

// The reduced relaxation has the value of the original one.
TEST_P(GalleryCaseTest, ReductionPreservesTheValue) {
  const GalleryCase c = BuildCase(GetParam());
  const PipelineVerdict v = RunPipeline(c.problem);
  if (!Usable(v.sdp)) GTEST_SKIP() << "no usable relaxation";
  const GeoCop& p = c.problem;
  SdpProblem sdp;
  sdp.n = p.n;
  sdp.objective = p.q;
  sdp.eq_constraints.emplace_back(p.h, 1.0);
  for (const SymMat& b : p.bset.members) sdp.ineq_constraints.push_back({b, Sense::kGe, 0.0});
  if (p.congruence) {
    if (auto pen = KernelPenalty(*p.congruence)) sdp.ineq_constraints.push_back({*pen, Sense::kGe, 0.0});
  }
  const SdpSolution full = Solve(sdp);
  ASSERT_TRUE(Usable(full)) << StatusName(full.status);
  EXPECT_NEAR(v.sdp.value, full.value, 1e-6 * (1 + std::abs(full.value)));
}

TEST_P(GalleryCaseTest, PostReductionStructure) {
  const PipelineVerdict v = RunPipeline(BuildCase(GetParam()).problem);
  if (v.reduction.reduced_n == 0) GTEST_SKIP() << "empty cone";
  EXPECT_TRUE(v.cert.structural.a3);
  EXPECT_TRUE(v.cert.structural.a4);
  EXPECT_TRUE(v.cert.structural.a5);
}

INSTANTIATE_TEST_SUITE_P(All, GalleryCaseTest, ::testing::ValuesIn(GalleryIds()),
                         [](const ::testing::TestParamInfo<std::string>& info) {
                           std::string name;
                           for (char ch : info.param) name += std::isalnum(ch) ? ch : '_';
                           return name;
                         });

// Certified pairs have nonnegative zeta values; refuted ones carry a PSD
// witness on which the first member is negative.
TEST(Gallery, PairVerdictsMatchZeta) {
  for (const std::string id : {"ex6.1", "ex6.1-reduced", "ex6.3", "fig2"}) {
    const GalleryCase c = BuildCase(id);
    const ConstraintSet s = Normalize(c.problem.bset);
    const ConditionBReport rep = CheckConditionB(s);
    for (const PairVerdict& pv : rep.pairs) {
      if (pv.status == Verdict::kCertified) {
        EXPECT_GE(pv.zeta0_ab, -1e-6) << id;
        EXPECT_GE(pv.zeta0_ba, -1e-6) << id;
      } else if (pv.status == Verdict::kRefuted) {
        ASSERT_TRUE(pv.witness.has_value()) << id;
        EXPECT_TRUE(IsPsd(*pv.witness, 1e-8));
        const SymMat& a = s.members[pv.witness_swapped ? pv.j : pv.i];
        const SymMat& b = s.members[pv.witness_swapped ? pv.i : pv.j];
        EXPECT_NEAR(Inner(b, *pv.witness), 0.0, 1e-8);
        EXPECT_LT(Inner(a, *pv.witness), 0.0);
      }
    }
  }
}

TEST(Gallery, PostReductionStructure) {
  const GalleryCase c = BuildCase("ex6.1");
  const PipelineVerdict v = RunPipeline(c.problem);
  EXPECT_EQ(v.reduction.reduced_n, 2);
  EXPECT_EQ(v.pruning.kept_indices, (std::vector<int>{1, 2}));
  EXPECT_TRUE(v.cert.structural.a3);
  EXPECT_TRUE(v.cert.structural.a4);
  EXPECT_TRUE(v.cert.structural.a5);
  EXPECT_EQ(v.cert.b.overall, Overall::kCertified);
}

}  // namespace
}  // namespace exactsdp
