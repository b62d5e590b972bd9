#include "exactsdp/sdp.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace exactsdp {
namespace {

using testing::ExampleA4;
using testing::ExampleB2;
using testing::ExampleB4;
using testing::ExampleC2;
using testing::RandomPsd;
using testing::RandomSym;
using testing::RandomVec;

SdpProblem TraceOne(const SymMat& q) {
  SdpProblem p;
  p.n = q.n();
  p.objective = q;
  p.eq_constraints.emplace_back(SymMat::Identity(q.n()), 1.0);
  return p;
}

TEST(Solve, EigenvalueCharacterization) {
  const SdpSolution s = Solve(TraceOne(SymMat::Diagonal({2, 5})));
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.value, 2.0, 1e-8);
}

TEST(Solve, RandomTraceOneMatchesReferenceEigenvalue) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 8;
    const SymMat q = RandomSym(rng, n);
    const SdpSolution s = Solve(TraceOne(q));
    ASSERT_EQ(s.status, SdpStatus::kOptimal);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(q.ToDense());
    EXPECT_NEAR(s.value, ref.eigenvalues()(0), 1e-8);
    EXPECT_GE(s.value, s.dual_value - 1e-8);
    EXPECT_GE(LambdaMin(s.x), -1e-8);
  }
}

TEST(Solve, ReducedExampleValue) {
  SdpProblem p = TraceOne(SymMat::Diagonal({1, -1}));
  p.ineq_constraints.push_back({ExampleB2(), Sense::kGe, 0.0});
  p.ineq_constraints.push_back({ExampleC2(), Sense::kGe, 0.0});
  const SdpSolution s = Solve(p);
  ASSERT_TRUE(Usable(s));
  EXPECT_NEAR(s.value, testing::AngleGridReducedMin(), 1e-6);
  EXPECT_NEAR(s.value, -std::sqrt(3.0) / 2.0, 1e-6);
}

TEST(Solve, NegativeTraceIsInfeasibleWithRay) {
  SdpProblem p;
  p.n = 3;
  p.objective = SymMat::Identity(3);
  p.eq_constraints.emplace_back(-SymMat::Identity(3), 1.0);
  const SdpSolution s = Solve(p);
  ASSERT_EQ(s.status, SdpStatus::kInfeasible);
  ASSERT_TRUE(s.infeasibility_ray.has_value());
  // Farkas: b^T y > 0 and -y H PSD reversed, i.e. A^T y NSD.
  const double y = (*s.infeasibility_ray)(0);
  EXPECT_GT(y, 0.0);
  EXPECT_LE(LambdaMax(y * -SymMat::Identity(3)), 1e-8);
}

TEST(Solve, UnboundedDetected) {
  SdpProblem p;
  p.n = 2;
  p.objective = SymMat::Diagonal({-1, 0});
  p.eq_constraints.emplace_back(SymMat::Diagonal({0, 1}), 1.0);
  const SdpSolution s = Solve(p);
  EXPECT_EQ(s.status, SdpStatus::kUnbounded);
}

TEST(Solve, RejectsBadInput) {
  SdpProblem p = TraceOne(SymMat::Identity(2));
  p.n = 3;
  EXPECT_THROW(Solve(p), std::invalid_argument);
  SdpProblem q = TraceOne(SymMat::Identity(2));
  q.eq_constraints[0].second = std::nan("");
  EXPECT_THROW(Solve(q), std::invalid_argument);
}

// Random feasible instances: weak duality at the optimum, primal feasibility
// of the returned X.
TEST(Solve, WeakDualityAndFeasibility) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 5;
    SdpProblem p = TraceOne(RandomSym(rng, n));
    const SymMat x0 = RandomPsd(rng, n, n);
    for (int k = 0; k < 3; ++k) {
      const SymMat a = RandomSym(rng, n);
      p.ineq_constraints.push_back({a, Sense::kGe, Inner(a, x0 / x0.Trace()) - 0.1});
    }
    const SdpSolution s = Solve(p);
    ASSERT_EQ(s.status, SdpStatus::kOptimal) << t;
    EXPECT_GE(s.value, s.dual_value - 1e-7);
    for (const auto& c : p.ineq_constraints) EXPECT_GE(Inner(c.a, s.x), c.rhs - 1e-7);
    EXPECT_NEAR(s.x.Trace(), 1.0, 1e-7);
    for (double y : s.dual_ineq) EXPECT_GE(y, -1e-7);
  }
}

// With strictly feasible primal and dual points the gap residual shrinks
// over the final iterations.
TEST(SolveConic, GapDecreasesNearTheEnd) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + t % 4;
    ConicForm f;
    f.n = n;
    f.c = RandomSym(rng, n) + 4.0 * SymMat::Identity(n);  // dual slack at y = 0
    f.c_lin = Eigen::VectorXd();
    f.a = {SymMat::Identity(n), RandomSym(rng, n)};
    f.a_lin = Eigen::MatrixXd::Zero(2, 0);
    const SymMat x0 = SymMat::Identity(n) / n;  // primal interior point
    f.b = Eigen::Vector2d(1.0, Inner(f.a[1], x0));
    const ConicSolution s = SolveConic(f);
    ASSERT_EQ(s.status, SdpStatus::kOptimal);
    ASSERT_GE(s.history.size(), 5u);
    for (std::size_t k = s.history.size() - 4; k < s.history.size(); ++k) {
      EXPECT_LE(s.history[k].gap, s.history[k - 1].gap) << "instance " << t << " step " << k;
    }
  }
}

TEST(AbCertificate, Examples) {
  const auto bc = SolveAbCertificate(ExampleB2(), ExampleC2(), 1e-8);
  ASSERT_TRUE(bc.has_value());
  EXPECT_NEAR(bc->first, 1.0, 1e-9);
  EXPECT_NEAR(bc->second, 1.0, 1e-9);

  EXPECT_FALSE(SolveAbCertificate(ExampleA4(), ExampleB4(), 1e-8).has_value());

  const SymMat b1 = SymMat::Diagonal({1, 1, -0.5});
  const SymMat b6 = SymMat::Diagonal({-1, -1, 1});
  const AbSearch r = SearchAbCertificate(b1, b6, 1e-8);
  ASSERT_TRUE(r.found);
  EXPECT_NEAR(r.beta / r.alpha, 0.75, 1e-9);
  EXPECT_TRUE(IsPsd(r.alpha * b1 + r.beta * b6, 1e-9));
}

TEST(AbCertificate, AnySignFindsNegativeCombination) {
  // -A is PSD: a certificate needs a negative coefficient.
  const SymMat a = -SymMat::Identity(2);
  const SymMat b = SymMat::Diagonal({1, -1});
  EXPECT_FALSE(SolveAbCertificate(a, b, 1e-8).has_value());
  const AbSearch r = SearchAnySignCombination(a, b, 1e-8);
  ASSERT_TRUE(r.found);
  EXPECT_TRUE(IsPsd(r.alpha * a + r.beta * b, 1e-8));
  EXPECT_GT(std::abs(r.alpha) + std::abs(r.beta), 0.0);
}

TEST(AbCertificate, ScaleInvariance) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> ud(0.1, 10.0);
  int found = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 3;
    // Mix of pairs with and without certificates.
    SymMat a = RandomSym(rng, n);
    SymMat b = RandomSym(rng, n);
    if (t % 2 == 0) b = RandomPsd(rng, n, n) - 0.3 * a;
    const double c = ud(rng);
    const double d = ud(rng);
    const auto base = SolveAbCertificate(a, b, 1e-8);
    const auto scaled = SolveAbCertificate(c * a, d * b, 1e-8);
    EXPECT_EQ(base.has_value(), scaled.has_value()) << t;
    if (base && scaled) {
      ++found;
      EXPECT_TRUE(IsPsd(scaled->first * c * a + scaled->second * d * b, 1e-7));
    }
  }
  EXPECT_GT(found, 5);
}

// Midpoint concavity of tau -> lambda_min(A + tau B).
TEST(AbCertificate, LambdaMinIsConcave) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> ud(-5, 5);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 6;
    const SymMat a = RandomSym(rng, n);
    const SymMat b = RandomSym(rng, n);
    const double t1 = ud(rng);
    const double t2 = ud(rng);
    const double mid = LambdaMin(a + 0.5 * (t1 + t2) * b);
    const double avg = 0.5 * (LambdaMin(a + t1 * b) + LambdaMin(a + t2 * b));
    EXPECT_GE(mid, avg - 1e-10);
  }
}

TEST(CenterOnFace, MovesToRelativeInterior) {
  // Optimal face of min <diag(0,0,1), X>, trace 1: the top-left 2 x 2 block.
  const SymMat obj = SymMat::Diagonal({0, 0, 1});
  const SymMat x = SymMat::Diagonal({0.9, 0.1, 0});
  const SymMat c = CenterOnFace(x, {{SymMat::Identity(3), 1.0}}, obj);
  EXPECT_NEAR(c(0, 0), 0.5, 1e-6);
  EXPECT_NEAR(c(1, 1), 0.5, 1e-6);
  EXPECT_NEAR(c(2, 2), 0.0, 1e-9);
  EXPECT_NEAR(Inner(obj, c), 0.0, 1e-9);
}

TEST(Usable, Thresholds) {
  SdpSolution s;
  s.status = SdpStatus::kMaxIter;
  s.residuals.primal = 1e-7;
  EXPECT_TRUE(Usable(s));
  s.residuals.gap = 1e-3;
  EXPECT_FALSE(Usable(s));
  s.status = SdpStatus::kOptimal;
  EXPECT_TRUE(Usable(s));
}

}  // namespace
}  // namespace exactsdp
