#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "exactsdp/certify.h"
#include "exactsdp/model.h"
#include "exactsdp/reduce.h"
#include "exactsdp/sdp.h"

namespace exactsdp {

struct PipelineConfig {
  double tol = 1e-8;
  std::uint64_t seed = 0;  // seeds the rank-one tie-breaking perturbation
  bool inequality_form = true;
  bool perturb_retry = true;
  int max_iter = 200;
};

/// Error raised by a pipeline stage; what() starts with "<stage>: ".
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& msg)
      : std::runtime_error(stage + ": " + msg), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline constexpr double kConfidentRatio = 1e6;

struct RankOneResult {
  Eigen::VectorXd x;
  double eigenratio = 0.0;  // lambda_1 / lambda_2; +inf when rank one
  double feas_residual = 0.0;
  double obj_gap = 0.0;
  bool confident = false;
  bool perturbed = false;  // x comes from the perturbed re-solve
  std::string diagnostic;
};

/// Rank-one point from an SDP optimum of p. eta is taken as <Q, x_sdp>.
/// If the spectrum is not separated, re-solves once with Q + eps gram(g)
/// (g a unit vector drawn from cfg.seed, eps = 1e-7 ||Q||_F) when
/// cfg.perturb_retry is set.
RankOneResult ExtractRankOne(const SymMat& x_sdp, const GeoCop& p,
                             const PipelineConfig& cfg = {});

enum class Exactness { kCertifiedExact, kSolvedRankOneUncertified, kRelaxationOnly };

std::string ExactnessName(Exactness e);

struct PipelineVerdict {
  /// Normalized input; includes -M^T M when a rank-deficient congruence is
  /// attached.
  GeoCop working;
  ReductionResult reduction;
  PruneResult pruning;  // indices refer to reduction.reduced.bset
  CertReport cert;
  SdpSolution sdp;  // in reduced coordinates
  RankOneResult rank_one;  // in reduced coordinates
  Exactness exactness = Exactness::kRelaxationOnly;
  Eigen::VectorXd lifted_x;  // original coordinates
  /// y with L y = lifted_x when a congruence L is attached.
  std::optional<Eigen::VectorXd> lifted_y;
};

/// -M^T M where the rows of M are an orthonormal basis of range(L)^perp,
/// or nothing when L has full row rank.
std::optional<SymMat> KernelPenalty(const Eigen::MatrixXd& l);

/// normalize, facially reduce, prune, certify, solve, extract. Certification
/// failures do not stop the solve. Throws StageError.
PipelineVerdict RunPipeline(const GeoCop& p, const PipelineConfig& cfg = {});

}  // namespace exactsdp
