#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "exactsdp/model.h"
#include "exactsdp/symmat.h"

namespace exactsdp {

struct OracleResult {
  bool feasible = false;  // false: no feasible point was found
  double value = 0.0;
  Eigen::VectorXd argmin;
  long samples_used = 0;
  bool refined = false;  // local descent improved on the raw samples
  /// solve_region_2d only: share of raster cells inside the feasible region.
  double feasible_fraction = 0.0;
};

inline constexpr long kDefaultOracleSamples = 200000;

/// Minimizes x^T Q x over x^T H x = 1, x^T B x >= 0 by sampling the
/// ellipsoid x = R^{-1} s (H = R^T R, s uniform on the sphere) and polishing
/// promising samples by projected descent. The value is an upper bound on
/// the infimum. Throws std::invalid_argument unless H is positive definite
/// and n <= 6.
///
/// Samples are drawn in blocks of 4096, each seeded by (seed, block index),
/// and every sample that enters the running top four of its block is
/// polished, so a longer run repeats every step of a shorter one.
OracleResult SolveSphere(const GeoCop& p, long samples = kDefaultOracleSamples,
                         std::uint64_t seed = 0);

/// Axis-aligned rectangle in the (u1, u2) plane.
struct Rect {
  double x_lo = -1.0;
  double x_hi = 1.0;
  double y_lo = -1.0;
  double y_hi = 1.0;
};

/// Minimizes q(u, 1, q_obj) over the cell centres of a resolution^2 raster
/// of `box` lying in the region q(u, 1, B) >= 0, then refines the best
/// cells by descent inside the region and box. Needs n == 3.
OracleResult SolveRegion2d(const ConstraintSet& s, const SymMat& q_obj,
                           const Rect& box, int resolution);

/// True when (u, 1) satisfies every member of s (q >= -slack).
bool InRegion(const ConstraintSet& s, const Eigen::VectorXd& u,
              double slack = 0.0);

}  // namespace exactsdp
