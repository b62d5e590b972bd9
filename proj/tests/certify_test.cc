#include "exactsdp/certify.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "exactsdp/gallery.h"
#include "test_util.h"

namespace exactsdp {
namespace {

using testing::ExampleA4;
using testing::ExampleB2;
using testing::ExampleB4;
using testing::ExampleC2;
using testing::ExampleC4;
using testing::RandomPsd;
using testing::RandomSym;
using testing::RandomVec;
using testing::Set;
using testing::V;

constexpr double kTol = 1e-8;

SymMat B1() { return SymMat::Diagonal({1, 1, -0.5}); }
SymMat B6() { return SymMat::Diagonal({-1, -1, 1}); }

ConstraintSet Subset(const std::vector<SymMat>& all, std::initializer_list<int> idx) {
  ConstraintSet s;
  s.n = all[0].n();
  for (int k : idx) s.members.push_back(all[k]);
  return s;
}

// Random PSD X with <b, X> <= 0, pushed along the most negative eigenvector
// of b when needed.
std::optional<SymMat> SampleInNegativeSlice(std::mt19937_64& rng, const SymMat& b) {
  SymMat x = RandomPsd(rng, b.n(), 1 + static_cast<int>(rng() % b.n()));
  const double v = Inner(b, x);
  if (v <= 0.0) return x;
  const EigDecomp e = EigSym(b);
  const double lam = e.values(b.n() - 1);
  if (lam >= 0.0) return std::nullopt;
  const Eigen::VectorXd w = e.vectors.col(b.n() - 1);
  std::uniform_real_distribution<double> ud(1.0, 3.0);
  return x + (ud(rng) * v / -lam) * Gram(w);
}

TEST(CheckPairB, ReducedExampleCertified) {
  const PairVerdict v = CheckPairB(ExampleB2(), ExampleC2(), kTol);
  ASSERT_EQ(v.status, Verdict::kCertified);
  ASSERT_TRUE(v.certificate.has_value());
  EXPECT_NEAR(v.certificate->first, 1.0, 1e-9);
  EXPECT_NEAR(v.certificate->second, 1.0, 1e-9);
  EXPECT_NEAR(v.margin, 0.0, 1e-9);
}

TEST(CheckPairB, FullExampleRefutedWithDisplayedWitness) {
  const PairVerdict v = CheckPairB(ExampleA4(), ExampleB4(), kTol);
  ASSERT_EQ(v.status, Verdict::kRefuted);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_FALSE(v.witness_swapped);
  const SymMat& x = *v.witness;
  // Scaled copy of diag(0, 0, 1, 1).
  const double s = x.Trace() / 2.0;
  EXPECT_LE(testing::MaxDiff(x, s * SymMat::Diagonal({0, 0, 1, 1})), 1e-9);
  EXPECT_NEAR(Inner(ExampleB4(), x) / s, 0.0, 1e-9);
  EXPECT_NEAR(Inner(ExampleA4(), x) / s, -2.0, 1e-9);
}

TEST(CheckPairB, FigureOnePairCertified) {
  const PairVerdict v = CheckPairB(B1(), B6(), kTol);
  EXPECT_EQ(v.status, Verdict::kCertified);
}

TEST(CheckConditionB, Examples) {
  EXPECT_EQ(CheckConditionB(Set(2, {ExampleB2(), ExampleC2()})).overall, Overall::kCertified);
  EXPECT_EQ(CheckConditionB(Set(4, {ExampleA4(), ExampleB4(), ExampleC4()})).overall,
            Overall::kNotCertified);
  const ConditionBReport single = CheckConditionB(Set(3, {B1()}));
  EXPECT_EQ(single.overall, Overall::kCertified);
  EXPECT_TRUE(single.pairs.empty());
}

// If a certificate is reported, no PSD X with <B, X> <= 0 has <A, X>
// noticeably negative.
TEST(CheckPairB, CertificateSoundnessBySampling) {
  std::mt19937_64 rng(21);
  int certified = 0;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 4;
    const SymMat a = RandomSym(rng, n);
    const SymMat b = t % 3 == 0 ? RandomSym(rng, n) : RandomPsd(rng, n, n) - 0.7 * a;
    const PairVerdict v = CheckPairB(a, b, kTol);
    if (v.status != Verdict::kCertified) continue;
    ++certified;
    ASSERT_TRUE(v.certificate.has_value());
    EXPECT_GT(v.certificate->first, 0.0);
    EXPECT_GT(v.certificate->second, 0.0);
    EXPECT_GE(LambdaMin(v.certificate->first * a + v.certificate->second * b),
              -kTol * (a.FrobeniusNorm() + b.FrobeniusNorm()) * 10);
    int samples = 0;
    for (int k = 0; k < 400 && samples < 200; ++k) {
      const auto x = SampleInNegativeSlice(rng, b);
      if (!x) break;
      ++samples;
      EXPECT_GE(Inner(a, *x), -1e-6 * x->FrobeniusNorm());
    }
  }
  EXPECT_GE(certified, 10);
}

TEST(CheckPairB, WitnessSoundness) {
  std::mt19937_64 rng(22);
  int refuted = 0;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 4;
    SymMat a = RandomSym(rng, n);
    SymMat b = RandomSym(rng, n);
    a = a / a.FrobeniusNorm();
    b = b / b.FrobeniusNorm();
    const PairVerdict v = CheckPairB(a, b, kTol);
    if (v.status != Verdict::kRefuted) continue;
    ++refuted;
    ASSERT_TRUE(v.witness.has_value());
    const SymMat& x = *v.witness;
    const SymMat& first = v.witness_swapped ? b : a;
    const SymMat& second = v.witness_swapped ? a : b;
    EXPECT_GE(LambdaMin(x), -kTol);
    EXPECT_LE(std::abs(Inner(second, x)), kTol);
    EXPECT_LE(Inner(first, x), -10 * kTol);
  }
  EXPECT_GE(refuted, 5);
}

TEST(CheckPairB, SymmetricAndScaleInvariant) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ud(0.2, 5.0);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 3;
    const SymMat a = RandomSym(rng, n);
    const SymMat b = t % 2 ? RandomSym(rng, n) : RandomPsd(rng, n, n) - 0.5 * a;
    const Verdict base = CheckPairB(a, b, kTol).status;
    EXPECT_EQ(CheckPairB(b, a, kTol).status, base) << t;
    EXPECT_EQ(CheckPairB(a, ud(rng) * b, kTol).status, base) << t;
    EXPECT_EQ(CheckPairB(ud(rng) * a, b, kTol).status, base) << t;
  }
}

TEST(CheckBprimeCprime, FigureOneCombinations) {
  const std::vector<SymMat> f = FigureOneForms(0.5);
  EXPECT_EQ(CheckBprimeCprime(Subset(f, {0, 1, 2})).overall, Overall::kCertified);
  EXPECT_EQ(CheckBprimeCprime(Subset(f, {0, 5})).overall, Overall::kCertified);
  EXPECT_EQ(CheckBprimeCprime(Subset(f, {1, 3})).overall, Overall::kCertified);
  for (const SymMat& b : f) EXPECT_TRUE(CheckCprimeMember(b).holds);
}

TEST(CheckBprimeCprime, OverlappingDisksRefutedWithWitness) {
  const ConstraintSet s =
      Set(3, {BallMatrix(V({0, 0}), 0.5), BallMatrix(V({0.5, 0}), 0.5)});
  const BprimeCprimeReport r = CheckBprimeCprime(s);
  EXPECT_EQ(r.overall, Overall::kNotCertified);
  ASSERT_EQ(r.b_prime.size(), 1u);
  const SliceVerdict& v = r.b_prime[0];
  ASSERT_EQ(v.status, Verdict::kRefuted);
  ASSERT_TRUE(v.witness_u.has_value());
  const double qi = EvalQuadratic(*v.witness_u, 1.0, s.members[0]);
  const double qj = EvalQuadratic(*v.witness_u, 1.0, s.members[1]);
  EXPECT_NEAR(qi, v.q_i, 1e-12);
  EXPECT_NEAR(qj, v.q_j, 1e-12);
  // Both orders require one strict and one weak violation.
  EXPECT_LE(std::max(qi, qj), 1e-8);
  EXPECT_LT(std::min(qi, qj), -1e-8);
  // The midpoint of the centres is a hand-checked witness.
  EXPECT_DOUBLE_EQ(EvalQuadratic(V({0.25, 0}), 1.0, s.members[0]), -0.1875);
  EXPECT_DOUBLE_EQ(EvalQuadratic(V({0.25, 0}), 1.0, s.members[1]), -0.1875);
}

TEST(CheckBprimeCprime, RingOfDisks) {
  std::vector<SymMat> m;
  for (int k = 0; k < 8; ++k) {
    const double t = k * M_PI / 4.0;
    m.push_back(BallMatrix(V({1.5 * std::cos(t), 1.5 * std::sin(t)}), 0.5));
  }
  m.push_back(SymMat::Diagonal({1, 1, -1}));
  m.push_back(SymMat::Diagonal({-1, -1, 4}));
  EXPECT_EQ(CheckBprimeCprime(Set(3, m)).overall, Overall::kCertified);
}

TEST(CheckCprimeMember, LimitHyperbolaFails) {
  // Both breakpoints at 4: (u2 - 4 u1)^2 + 0.5 >= 0 everywhere.
  const MemberVerdict v = CheckCprimeMember(HyperbolaLimit(4.0, 0.5));
  EXPECT_FALSE(v.holds);
  EXPECT_GE(v.infimum, 0.5 - 1e-9);
}

TEST(CheckCprimeMember, WitnessIsNegative) {
  const MemberVerdict v = CheckCprimeMember(B6());
  ASSERT_TRUE(v.holds);
  ASSERT_TRUE(v.witness_u.has_value());
  EXPECT_LT(EvalQuadratic(*v.witness_u, 1.0, B6()), 0.0);
}

TEST(CheckBprimeCprime, ScaleInvariance) {
  const std::vector<SymMat> f = FigureOneForms(0.5);
  for (std::initializer_list<int> idx : {std::initializer_list<int>{0, 1, 2},
                                         std::initializer_list<int>{1, 3},
                                         std::initializer_list<int>{0, 2, 4}}) {
    ConstraintSet s = Subset(f, idx);
    const Overall base = CheckBprimeCprime(s).overall;
    for (SymMat& b : s.members) b = 3.5 * b;
    EXPECT_EQ(CheckBprimeCprime(s).overall, base);
  }
}

TEST(CheckStructural, Examples) {
  const StructuralReport r = CheckStructural(Set(2, {ExampleB2(), ExampleC2()}));
  EXPECT_TRUE(r.a4);
  EXPECT_TRUE(r.a5);
  const StructuralReport zero = CheckStructural(Set(3, {SymMat(3)}));
  EXPECT_TRUE(zero.a4);
  const StructuralReport neg = CheckStructural(Set(2, {-SymMat::Identity(2), ExampleB2()}));
  EXPECT_FALSE(neg.a3);
}

TEST(CheckStructural, SlaterPointOnReducedCone) {
  // [[1, -1/2], [-1/2, 1]] is positive definite with <B, X> = <C, X> = 0.
  const SymMat x = SymMat::FromRows({{1, -0.5}, {-0.5, 1}});
  EXPECT_EQ(Inner(ExampleB2(), x), 0.0);
  EXPECT_GT(LambdaMin(x), 0.0);
  const SlaterResult s = SolveSlater(Set(2, {ExampleB2(), ExampleC2()}));
  EXPECT_GT(s.t, 1e-3);
  EXPECT_TRUE(CheckStructural(Set(2, {ExampleB2(), ExampleC2()})).a3);
}

TEST(Classify, Examples) {
  const Classification a = Classify(Set(2, {ExampleB2(), ExampleC2()}));
  EXPECT_TRUE(a.case_a);
  EXPECT_EQ(a.exposing_index, 0);
  const Classification z = Classify(Set(3, {SymMat(3)}));
  EXPECT_TRUE(z.case_a);

  std::vector<SymMat> m;
  for (int k = 0; k < 8; ++k) {
    const double t = k * M_PI / 4.0;
    m.push_back(BallMatrix(V({1.5 * std::cos(t), 1.5 * std::sin(t)}), 0.5));
  }
  m.push_back(SymMat::Diagonal({1, 1, -1}));
  m.push_back(SymMat::Diagonal({-1, -1, 4}));
  EXPECT_FALSE(Classify(Set(3, m)).case_a);
}

TEST(Certify, OverallPaths) {
  EXPECT_EQ(Certify(Set(2, {ExampleB2(), ExampleC2()})).overall, Overall::kCertified);
  EXPECT_EQ(Certify(Set(4, {ExampleA4(), ExampleB4(), ExampleC4()})).overall,
            Overall::kNotCertified);
}

TEST(Includes, PsdMemberIsDominated) {
  EXPECT_TRUE(Includes(testing::ExampleA2(), ExampleB2()));
  EXPECT_FALSE(Includes(ExampleB2(), testing::ExampleA2()));
}

}  // namespace
}  // namespace exactsdp
