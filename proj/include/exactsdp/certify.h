#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "exactsdp/model.h"
#include "exactsdp/sdp.h"
#include "exactsdp/symmat.h"

namespace exactsdp {

enum class Verdict { kCertified, kRefuted, kInconclusive };
enum class Overall { kCertified, kNotCertified, kInconclusive };

std::string VerdictName(Verdict v);
std::string OverallName(Overall o);

/// Result of testing J_0(b) in J_+(a) (and the reverse direction) for one
/// pair of members.
struct PairVerdict {
  int i = -1;
  int j = -1;
  Verdict status = Verdict::kInconclusive;
  std::optional<std::pair<double, double>> certificate;  // (alpha, beta)
  /// PSD witness with <b, X> = 0 (within tol) and <a, X> < 0, or the same
  /// with the roles swapped when witness_swapped is set.
  std::optional<SymMat> witness;
  bool witness_swapped = false;
  double margin = 0.0;  // best lambda_min((1-s) a + s b)
  /// min <a, X> over J_0(b) with trace X = 1, and the swapped value.
  double zeta0_ab = 0.0;
  double zeta0_ba = 0.0;
  /// min <a, X> over J_-(b) with trace X = 1 (the normalized primal SDP),
  /// and the swapped value.
  double zeta_ab = 0.0;
  double zeta_ba = 0.0;
};

PairVerdict CheckPairB(const SymMat& a, const SymMat& b, double tol = 1e-8);

struct ConditionBReport {
  Overall overall = Overall::kCertified;
  std::vector<PairVerdict> pairs;  // i < j, lexicographic
};

ConditionBReport CheckConditionB(const ConstraintSet& s, double tol = 1e-8);

/// (C)' for one member: some u with q(u, 1, B) < 0.
struct MemberVerdict {
  int index = -1;
  bool holds = false;
  std::optional<Eigen::VectorXd> witness_u;
  double witness_value = 0.0;  // q(u, 1, B) at the witness
  double infimum = 0.0;        // inf_u q(u, 1, B); -inf when unbounded below
  SdpStatus sdp_status = SdpStatus::kNumerical;
  double sdp_value = 0.0;      // min <B, X> with X_nn = 1
};

/// (B)' for one unordered pair: the slices f_-(1, B) and f_--(1, A) are
/// disjoint in both orders.
struct SliceVerdict {
  int i = -1;
  int j = -1;
  Verdict status = Verdict::kInconclusive;
  std::string route;  // "certificate", "inclusion", "witness" or "none"
  std::optional<std::pair<double, double>> certificate;
  /// Point u with q(u, 1, members[j]) <= 0 and q(u, 1, members[i]) < 0
  /// (or the reverse when witness_swapped is set).
  std::optional<Eigen::VectorXd> witness_u;
  bool witness_swapped = false;
  double q_i = 0.0;
  double q_j = 0.0;
};

struct BprimeCprimeReport {
  Overall overall = Overall::kCertified;
  std::vector<SliceVerdict> b_prime;
  std::vector<MemberVerdict> c_prime;
  bool b_prime_holds = false;
  bool c_prime_holds = false;
};

struct WitnessSearchOptions {
  double box = 10.0;
};

BprimeCprimeReport CheckBprimeCprime(const ConstraintSet& s, double tol = 1e-8,
                                     const WitnessSearchOptions& opts = {});

MemberVerdict CheckCprimeMember(const SymMat& b, double tol = 1e-8);

struct StructuralReport {
  bool a1 = false;
  bool a3 = false;
  bool a4 = false;
  bool a5 = false;
  double slater_margin = 0.0;  // t* of the Slater SDP
  std::vector<int> psd_members;
  /// (i, j) with J_+(members[j]) contained in J_+(members[i]).
  std::vector<std::pair<int, int>> inclusions;
};

StructuralReport CheckStructural(const ConstraintSet& s, double tol = 1e-8);

struct Classification {
  bool case_a = false;
  int exposing_index = -1;     // first member of B_0 in case (a)
  std::vector<int> b0;         // members with <B, X> = 0 on J_+
  std::vector<double> max_values;
};

Classification Classify(const ConstraintSet& s, double tol = 1e-8);

/// Full report for a constraint set.
struct CertReport {
  StructuralReport structural;
  ConditionBReport b;
  std::optional<BprimeCprimeReport> bc_prime;
  std::optional<Classification> classification;
  Overall overall = Overall::kInconclusive;
};

/// Runs every checker. The inequality-form conditions need n >= 2.
/// overall is certified when condition (B) is certified, or when (B)' and
/// (C)' both hold; not_certified when both paths are refuted.
CertReport Certify(const ConstraintSet& s, double tol = 1e-8,
                   bool inequality_form = true);

// Auxiliary SDPs shared with the reduction stage ------------------------------

/// max t s.t. X - t I PSD, <B, X> >= 0 for B in s, trace X = 1.
struct SlaterResult {
  SdpStatus status = SdpStatus::kNumerical;
  SymMat x;
  double t = 0.0;
};
SlaterResult SolveSlater(const ConstraintSet& s, double tol = 1e-8);

/// min <a, X> s.t. <b, X> (sense) 0, trace X = 1, X PSD.
SdpSolution SolvePairSdp(const SymMat& a, const SymMat& b, Sense sense,
                         double tol = 1e-8);

/// True when J_+(b) is contained in J_+(a) to tolerance.
bool Includes(const SymMat& a, const SymMat& b, double tol = 1e-8);

}  // namespace exactsdp
