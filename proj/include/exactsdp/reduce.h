#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "exactsdp/model.h"
#include "exactsdp/sdp.h"
#include "exactsdp/symmat.h"

namespace exactsdp {

/// Relative eigenvalue cut used to read off the rank of a max-rank point.
inline constexpr double kRankTol = 1e-7;

struct MaxRankPoint {
  SymMat x;
  double t = 0.0;
  SdpStatus status = SdpStatus::kNumerical;
};

/// Solves max t s.t. X - t I PSD, <B, X> >= 0 (B in s), trace X = 1.
/// An empty slice is reported with status kInfeasible. Throws
/// std::runtime_error if the solver stops without a usable answer.
MaxRankPoint FindMaxRankPoint(const ConstraintSet& s, double tol = 1e-8);

struct ReductionResult {
  int original_n = 0;
  int reduced_n = 0;
  /// I - P P^T in original coordinates; absent for the identity reduction.
  std::optional<SymMat> exposing;
  Eigen::MatrixXd basis;  // original_n x reduced_n, orthonormal columns
  GeoCop reduced;
  double slater_margin = 0.0;
  int rounds = 0;

  SymMat Lift(const SymMat& x_reduced) const;
  Eigen::VectorXd Lift(const Eigen::VectorXd& x_reduced) const;
};

/// Repeats: max-rank point; stop if Slater holds, else restrict every data
/// matrix to the range of the max-rank point. The range is first snapped to
/// a basis with small entries flushed, kept only if an SDP confirms that the
/// snapped face still contains the cone. Members are projected but not
/// normalized. When the cone collapses to {O}, reduced_n is 0.
ReductionResult FacialReduce(const GeoCop& p, double tol = 1e-8);

struct PruneResult {
  ConstraintSet kept;
  std::vector<int> kept_indices;
  std::vector<int> removed_indices;
};

/// Drops PSD members (unless the set is {O}) and every member A with
/// J_+(A) containing J_+(B) for another remaining B; one representative per
/// equivalence class survives, the one with the smallest packed entries.
PruneResult RemoveRedundant(const ConstraintSet& s, double tol = 1e-8);

}  // namespace exactsdp
