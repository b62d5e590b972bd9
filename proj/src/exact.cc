#include "exactsdp/exact.h"

#include <cmath>
#include <exception>
#include <limits>
#include <random>

namespace exactsdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Attempt {
  VectorXd x;
  double ratio = 0.0;
  bool scaled = false;
  std::string diagnostic;
};

Attempt TopEigenvector(const SymMat& x, const SymMat& h) {
  Attempt a;
  const EigDecomp e = EigSym(x);
  const double l1 = e.values(0);
  const double l2 = x.n() > 1 ? std::max(e.values(1), 0.0) : 0.0;
  if (!(l1 > 0.0)) {
    a.diagnostic = "SDP matrix has no positive eigenvalue";
    return a;
  }
  a.ratio = l2 > 1e-14 * l1 ? l1 / l2 : std::numeric_limits<double>::infinity();
  VectorXd v = e.vectors.col(0);
  const double vhv = QuadraticForm(h, v);
  if (!(vhv > 0.0)) {
    a.diagnostic = "top eigenvector has v^T H v <= 0";
    return a;
  }
  v /= std::sqrt(vhv);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-14) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  a.x = v;
  a.scaled = true;
  return a;
}

void Score(RankOneResult& r, const GeoCop& p, double eta) {
  double feas = std::abs(QuadraticForm(p.h, r.x) - 1.0);
  for (const SymMat& b : p.bset.members) {
    feas = std::max(feas, -QuadraticForm(b, r.x));
  }
  r.feas_residual = feas;
  r.obj_gap = std::abs(QuadraticForm(p.q, r.x) - eta);
  r.confident = r.eigenratio >= kConfidentRatio && r.feas_residual <= 1e-6 &&
                r.obj_gap <= 1e-6 * (1.0 + std::abs(eta));
}

SdpProblem Relaxation(const GeoCop& p, const SymMat& objective) {
  SdpProblem sdp;
  sdp.n = p.n;
  sdp.objective = objective;
  sdp.eq_constraints.emplace_back(p.h, 1.0);
  for (const SymMat& b : p.bset.members) {
    sdp.ineq_constraints.push_back({b, Sense::kGe, 0.0});
  }
  return sdp;
}

template <class F>
auto Stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

std::string ExactnessName(Exactness e) {
  switch (e) {
    case Exactness::kCertifiedExact: return "certified_exact";
    case Exactness::kSolvedRankOneUncertified: return "solved_rank_one_uncertified";
    case Exactness::kRelaxationOnly: return "relaxation_only";
  }
  return "unknown";
}

RankOneResult ExtractRankOne(const SymMat& x_sdp, const GeoCop& p,
                             const PipelineConfig& cfg) {
  if (x_sdp.n() != p.n) throw std::invalid_argument("ExtractRankOne: order mismatch");
  if (!x_sdp.AllFinite()) throw std::invalid_argument("ExtractRankOne: non-finite matrix");
  const double eta = Inner(p.q, x_sdp);
  RankOneResult r;
  Attempt a = TopEigenvector(x_sdp, p.h);
  r.eigenratio = a.ratio;
  r.diagnostic = a.diagnostic;
  if (a.scaled) {
    r.x = a.x;
    Score(r, p, eta);
  }
  if (r.eigenratio >= kConfidentRatio || !cfg.perturb_retry) return r;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  VectorXd g(p.n);
  for (int i = 0; i < p.n; ++i) g(i) = normal(rng);
  g /= g.norm();
  const double qn = p.q.FrobeniusNorm();
  const double eps = 1e-7 * (qn > 0.0 ? qn : 1.0);
  const SdpSolution sol =
      Solve(Relaxation(p, p.q + eps * Gram(g)), cfg.tol, cfg.max_iter);
  if (!Usable(sol)) {
    r.diagnostic = "perturbed re-solve failed: " + StatusName(sol.status);
    return r;
  }
  const Attempt b = TopEigenvector(sol.x, p.h);
  if (!b.scaled || b.ratio <= r.eigenratio) return r;
  RankOneResult rr;
  rr.x = b.x;
  rr.eigenratio = b.ratio;
  rr.perturbed = true;
  Score(rr, p, eta);
  return rr;
}

std::optional<SymMat> KernelPenalty(const MatrixXd& l) {
  Eigen::JacobiSVD<MatrixXd> svd(l, Eigen::ComputeFullU);
  const Eigen::Index rank = svd.rank();
  if (rank >= l.rows()) return std::nullopt;
  const MatrixXd m = svd.matrixU().rightCols(l.rows() - rank).transpose();
  const MatrixXd pen = -(m.transpose() * m);
  return SymMat::FromDense(0.5 * (pen + pen.transpose()));
}

PipelineVerdict RunPipeline(const GeoCop& p, const PipelineConfig& cfg) {
  PipelineVerdict v;
  Stage("validate", [&] {
    p.Validate();
    return 0;
  });

  v.working = p;
  v.working.bset = Stage("normalize", [&] {
    ConstraintSet s = p.bset;
    if (p.congruence) {
      if (p.congruence->rows() != p.n) {
        throw std::invalid_argument("congruence must have n rows");
      }
      if (auto pen = KernelPenalty(*p.congruence)) s.members.push_back(*pen);
    }
    return Normalize(s);
  });

  v.reduction = Stage("reduce", [&] { return FacialReduce(v.working, cfg.tol); });
  const GeoCop& red = v.reduction.reduced;

  if (v.reduction.reduced_n == 0) {
    // J_+ = {O}: no X with <H, X> = 1.
    v.sdp.status = SdpStatus::kInfeasible;
    v.cert.overall = Overall::kInconclusive;
    v.rank_one.diagnostic = "feasible cone is {O}";
    v.lifted_x = VectorXd::Zero(p.n);
    v.exactness = Exactness::kRelaxationOnly;
    return v;
  }

  v.pruning = Stage("prune", [&] { return RemoveRedundant(red.bset, cfg.tol); });
  // The slice conditions refer to the original (u, z) coordinates.
  const bool slices = cfg.inequality_form && v.reduction.reduced_n == p.n;
  v.cert = Stage("certify", [&] { return Certify(v.pruning.kept, cfg.tol, slices); });

  v.sdp = Stage("solve", [&] {
    return Solve(Relaxation(red, red.q), cfg.tol, cfg.max_iter);
  });

  if (Usable(v.sdp)) {
    v.rank_one = Stage("extract", [&] { return ExtractRankOne(v.sdp.x, red, cfg); });
  } else {
    v.rank_one.diagnostic = "SDP status " + StatusName(v.sdp.status);
  }

  if (v.rank_one.x.size() == red.n) {
    v.lifted_x = v.reduction.Lift(v.rank_one.x);
    if (p.congruence) {
      v.lifted_y = p.congruence->completeOrthogonalDecomposition().solve(v.lifted_x);
    }
  } else {
    v.lifted_x = VectorXd::Zero(p.n);
  }

  if (v.cert.overall == Overall::kCertified && v.sdp.status == SdpStatus::kOptimal) {
    v.exactness = Exactness::kCertifiedExact;
  } else if (v.rank_one.confident) {
    v.exactness = Exactness::kSolvedRankOneUncertified;
  } else {
    v.exactness = Exactness::kRelaxationOnly;
  }
  return v;
}

}  // namespace exactsdp
