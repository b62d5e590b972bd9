#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "exactsdp/symmat.h"

namespace exactsdp {

enum class SdpStatus { kOptimal, kInfeasible, kUnbounded, kMaxIter, kNumerical };

std::string StatusName(SdpStatus s);

enum class Sense { kGe, kLe, kEq };

struct LinearConstraint {
  SymMat a;
  Sense sense = Sense::kGe;
  double rhs = 0.0;
};

/// minimize <objective, X> subject to X PSD, <A_i, X> = b_i, and the
/// inequality rows <A_j, X> (sense) rhs_j.
struct SdpProblem {
  int n = 0;
  SymMat objective;
  std::vector<std::pair<SymMat, double>> eq_constraints;
  std::vector<LinearConstraint> ineq_constraints;
};

struct Residuals {
  double primal = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual = 0.0;    // ||C - A^T y - Z|| / (1 + ||C||)
  double gap = 0.0;     // |pobj - dobj| / (1 + |pobj| + |dobj|)

  double Max() const { return std::max(primal, std::max(dual, gap)); }
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kNumerical;
  SymMat x;
  std::vector<double> dual_eq;
  std::vector<double> dual_ineq;  // sign-adjusted to be >= 0 for <= and >=
  double value = 0.0;             // primal objective
  double dual_value = 0.0;
  Residuals residuals;
  int iterations = 0;
  /// Farkas ray y with A^T y <= 0 and b^T y > 0 (status kInfeasible).
  std::optional<Eigen::VectorXd> infeasibility_ray;
  /// Primal improving ray (status kUnbounded).
  std::optional<SymMat> unbounded_ray;
};

/// Standard form with one PSD block X and a nonnegative block x:
///   minimize <c, X> + c_lin^T x  s.t.  <a_i, X> + a_lin.row(i) x = b_i,
///   X PSD, x >= 0.
/// The dual is  maximize b^T y  s.t.  c - sum y_i a_i PSD,
///   c_lin - a_lin^T y >= 0.
struct ConicForm {
  int n = 0;
  SymMat c;
  Eigen::VectorXd c_lin;
  std::vector<SymMat> a;
  Eigen::MatrixXd a_lin;  // a.size() x c_lin.size()
  Eigen::VectorXd b;
};

struct ConicSolution {
  SdpStatus status = SdpStatus::kNumerical;
  SymMat x;
  Eigen::VectorXd x_lin;
  Eigen::VectorXd y;
  SymMat z;
  Eigen::VectorXd z_lin;
  double primal_value = 0.0;
  double dual_value = 0.0;
  Residuals residuals;
  int iterations = 0;
  std::optional<Eigen::VectorXd> infeasibility_ray;
  std::optional<std::pair<SymMat, Eigen::VectorXd>> unbounded_ray;
  /// Residuals at the start of every iteration.
  std::vector<Residuals> history;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
};

/// Primal-dual path following with Nesterov-Todd scaling and Mehrotra
/// predictor-corrector. Throws std::invalid_argument on inconsistent
/// dimensions or non-finite data.
ConicSolution SolveConic(const ConicForm& p, const SolverOptions& opts = {});

/// Throws std::invalid_argument on bad input. Inequalities become slacks.
SdpSolution Solve(const SdpProblem& p, double tol = 1e-8, int max_iter = 200);

/// True when the solution is optimal, or stopped early with all residuals
/// below `loose`.
bool Usable(const SdpSolution& s, double loose = 1e-6);
bool Usable(const ConicSolution& s, double loose = 1e-6);

/// Moves a point x of an optimal face to the analytic centre of that face:
/// the face of the PSD cone spanned by the range of x (snapped as in
/// RangeBasis), cut by the given equalities and by the level set of
/// `objective` through x. Returns x unchanged if the centring fails.
SymMat CenterOnFace(const SymMat& x,
                    const std::vector<std::pair<SymMat, double>>& equalities,
                    const SymMat& objective);

// Two-matrix certificates ------------------------------------------------------

struct AbSearch {
  bool found = false;
  double alpha = 0.0;
  double beta = 0.0;
  /// max over s in (0,1) of lambda_min((1-s) a + s b), i.e. the maximum of
  /// lambda_min(a + tau b) / (1 + tau) over tau > 0.
  double margin = 0.0;
};

/// Golden-section search on the concave function
/// s -> lambda_min((1-s) a + s b). Returns alpha = 1, beta = tau = s/(1-s);
/// tau is snapped to a nearby small-denominator rational when that does not
/// lower the margin. found iff lambda_min(a + tau b) >= -tol(||a|| + ||b||).
AbSearch SearchAbCertificate(const SymMat& a, const SymMat& b, double tol);

/// (alpha, beta) with alpha, beta > 0 and alpha a + beta b PSD, if any.
std::optional<std::pair<double, double>> SolveAbCertificate(const SymMat& a,
                                                            const SymMat& b,
                                                            double tol);

/// Searches every sign quadrant for a nonzero (alpha, beta) with
/// alpha a + beta b PSD. The margin is the best normalized lambda_min found;
/// found iff margin >= -tol(||a|| + ||b||).
AbSearch SearchAnySignCombination(const SymMat& a, const SymMat& b, double tol);

}  // namespace exactsdp
