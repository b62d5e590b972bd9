#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "exactsdp/symmat.h"

namespace exactsdp {

// ---------------------------------------------------------------------------
// Constraint families. Each realizes a (possibly infinite) set of matrices in
// S^n whose quadratic forms q(u, z, B) = (u; z)^T B (u; z) describe the
// constraint regions q(u, 1, B) >= 0.
// ---------------------------------------------------------------------------

struct ExplicitFamily {
  std::vector<SymMat> members;
};

/// Ball constraints ||u - t z||^2 - r^2 z^2 >= 0 for centres t in T.
/// With `centers` empty, T is the lattice lattice_step * Z^{n-1}, which can
/// only be realized through Discretize() with a truncation box.
struct BallGrid {
  double radius = 0.5;
  int lattice_step = 1;
  std::vector<Eigen::VectorXd> centers;
};

/// Hyperbola constraints (u2 - a_{k-1} u1)(u2 - a_k u1) + r^2 z^2 >= 0 in
/// S^3, one member per consecutive breakpoint pair.
struct HyperbolaSeq {
  std::vector<double> breakpoints;  // a_0 < a_1 < ... < a_m, a_0 >= 0
  double r_squared = 0.5;
  /// Limit point of the breakpoint sequence used by HyperbolaLimit();
  /// defaults to the last breakpoint.
  std::optional<double> limit;
};

/// One parabola member: sign * L^T P(lambda) L where P has P_ii = lambda_i
/// (i = 2..n) and P_1n = -1/2, so q(u, 1, P) = -u1 + sum lambda_i u_i^2
/// + lambda_n.
struct ParabolaMember {
  std::vector<double> lambdas;  // (lambda_2, ..., lambda_n), all > 0
  int sign = 1;                 // +1 or -1
  Eigen::MatrixXd transform;    // optional n x n congruence; empty = identity
};

struct ParabolaSet {
  std::vector<ParabolaMember> members;
};

/// q(u, z) = -sum_{i<=l} lambda_i u_i^2
///           + sum_{j>l} sum_{i<=l} lambda_j (u_j - sigma u_i)^2
///           + lambda_n z^2,
/// one member per sigma. With `sigmas` empty the family is indexed by the
/// continuum of sigma values and must be discretized.
struct GeneralizedHyperbola {
  Eigen::VectorXd lambda;  // (lambda_1, ..., lambda_n), all > 0
  int split = 1;           // l, 1 <= l <= n - 2
  std::vector<double> sigmas;
};

using ConstraintFamily = std::variant<ExplicitFamily, BallGrid, HyperbolaSeq,
                                      ParabolaSet, GeneralizedHyperbola>;

/// Stable name of the family kind: "explicit", "ball_grid", "hyperbola_seq",
/// "parabola_set" or "generalized_hyperbola".
std::string FamilyKindName(const ConstraintFamily& f);

/// Closed interval used to truncate infinite index sets (centre coordinates
/// for ball lattices, sigma for generalized hyperbolas).
struct Box {
  double lo = 0.0;
  double hi = 0.0;
};

struct DiscretizationConfig {
  std::vector<double> epsilon_schedule;  // strictly decreasing, positive
  Box box;
};

struct ConstraintSet {
  int n = 0;
  std::vector<SymMat> members;
  std::optional<ConstraintFamily> family;
  std::string truncation;  // human-readable truncation descriptor

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

/// Geometric conic problem: minimize <Q, X> over X in Gamma^n intersected
/// with J_+(B) subject to <H, X> = 1.
///
/// `congruence`, when present, is an n x n' matrix L: the caller's problem
/// lives in y-space with data (L^T Q L, L^T H L, {L^T B L}), and solutions
/// are reported as y with L y = x.
struct GeoCop {
  int n = 0;
  SymMat q;
  SymMat h;
  ConstraintSet bset;
  std::optional<Eigen::MatrixXd> congruence;

  /// Throws std::invalid_argument if dimensions disagree.
  void Validate() const;
};

// Closed-form members --------------------------------------------------------

/// B(t) = [I, -t; -t^T, t^T t - r^2].
SymMat BallMatrix(const Eigen::VectorXd& center, double radius);
/// B_k = blockdiag(C_k, r^2) with C_k = [a_prev a_k, -(a_prev + a_k)/2; ., 1].
SymMat HyperbolaMatrix(double a_prev, double a_k, double r_squared);
/// blockdiag([a^2, -a; -a, 1], r^2): the limit of HyperbolaMatrix as both
/// breakpoints tend to a.
SymMat HyperbolaLimit(double a_limit, double r_squared);
SymMat ParabolaMatrix(const std::vector<double>& lambdas);
SymMat GeneralizedHyperbolaMatrix(const Eigen::VectorXd& lambda, double sigma,
                                  int split);

// Operations -----------------------------------------------------------------

/// q(u, z, b). Requires u.size() == b.n() - 1.
double EvalQuadratic(const Eigen::VectorXd& u, double z, const SymMat& b);

/// Realizes a finite family. Throws std::invalid_argument on invalid
/// parameters or on an index set that needs Discretize().
ConstraintSet BuildFamily(const ConstraintFamily& f, int n);

/// Scales members to unit Frobenius norm, drops zero members unless every
/// member is zero (then returns {O}), and removes duplicates that agree after
/// rounding to 1e-12.
ConstraintSet Normalize(const ConstraintSet& s);

/// Finite subset B_k of the box-truncated family such that every member of
/// the truncated family is within epsilon_schedule[k] (Frobenius) of some
/// selected member. Selections are nested in k.
ConstraintSet Discretize(const ConstraintFamily& f,
                         const DiscretizationConfig& cfg, int k, int n);

/// Lattice points step * Z^dim inside [lo, hi]^dim, in lexicographic order.
std::vector<Eigen::VectorXd> LatticePoints(int dim, int step, const Box& box);

}  // namespace exactsdp
