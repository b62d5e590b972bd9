#include "exactsdp/reduce.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exactsdp/certify.h"

namespace exactsdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kSnap = 1e-4;

ConstraintSet Project(const ConstraintSet& s, const MatrixXd& p) {
  ConstraintSet out;
  out.n = static_cast<int>(p.cols());
  out.family = s.family;
  out.truncation = s.truncation;
  for (const SymMat& b : s.members) out.members.push_back(Congruence(b, p));
  return out;
}

// max <I - P P^T, X> over J_+(s) with trace X = 1 is ~0 iff the face
// spanned by P contains the cone.
bool FaceContainsCone(const ConstraintSet& s, const MatrixXd& p, double tol) {
  const MatrixXd f = MatrixXd::Identity(p.rows(), p.rows()) - p * p.transpose();
  SdpProblem sdp;
  sdp.n = s.n;
  sdp.objective = -SymMat::FromDense(0.5 * (f + f.transpose()));
  sdp.eq_constraints.emplace_back(SymMat::Identity(s.n), 1.0);
  for (const SymMat& b : s.members) sdp.ineq_constraints.push_back({b, Sense::kGe, 0.0});
  const SdpSolution sol = Solve(sdp, tol);
  return Usable(sol) && -sol.value <= 100.0 * tol;
}

}  // namespace

MaxRankPoint FindMaxRankPoint(const ConstraintSet& s, double tol) {
  const SlaterResult r = SolveSlater(s, tol);
  MaxRankPoint out;
  out.status = r.status;
  out.x = r.x;
  out.t = r.t;
  if (r.status == SdpStatus::kInfeasible) return out;
  if (r.status != SdpStatus::kOptimal) {
    // Accept slightly loose answers; these SDPs lack strict complementarity
    // whenever Slater fails.
    const double tr = r.x.Trace();
    if (!r.x.AllFinite() || std::abs(tr - 1.0) > 1e-5) {
      throw std::runtime_error("FindMaxRankPoint: solver stopped with status " +
                               StatusName(r.status));
    }
  }
  return out;
}

SymMat ReductionResult::Lift(const SymMat& x_reduced) const {
  if (x_reduced.n() != reduced_n) {
    throw std::invalid_argument("Lift: reduced matrix has wrong order");
  }
  if (reduced_n == 0) return SymMat(original_n);
  const MatrixXd m = basis * x_reduced.ToDense() * basis.transpose();
  return SymMat::FromDense(0.5 * (m + m.transpose()));
}

VectorXd ReductionResult::Lift(const VectorXd& x_reduced) const {
  if (x_reduced.size() != reduced_n) {
    throw std::invalid_argument("Lift: reduced vector has wrong length");
  }
  if (reduced_n == 0) return VectorXd::Zero(original_n);
  return basis * x_reduced;
}

ReductionResult FacialReduce(const GeoCop& p, double tol) {
  p.Validate();
  ReductionResult out;
  out.original_n = p.n;
  MatrixXd basis = MatrixXd::Identity(p.n, p.n);
  ConstraintSet cur = p.bset;
  int n = p.n;

  for (int round = 0; round < p.n; ++round) {
    const MaxRankPoint mr = FindMaxRankPoint(cur, tol);
    out.rounds = round + 1;
    if (mr.status == SdpStatus::kInfeasible) {
      basis = MatrixXd::Zero(p.n, 0);
      n = 0;
      out.slater_margin = 0.0;
      break;
    }
    out.slater_margin = mr.t;
    if (mr.t > tol) break;
    const EigDecomp e = EigSym(mr.x);
    const double cut = kRankTol * std::max(e.values(0), 0.0);
    int rank = 0;
    while (rank < n && e.values(rank) > cut) ++rank;
    if (rank == n) break;
    if (rank == 0) {
      basis = MatrixXd::Zero(p.n, 0);
      n = 0;
      break;
    }
    const MatrixXd range = basis * e.vectors.leftCols(rank);
    MatrixXd next = RangeBasis(range, kSnap);
    if (!FaceContainsCone(p.bset, next, tol)) next = RangeBasis(range);
    // Express the new basis in the current coordinates.
    const MatrixXd step = basis.transpose() * next;
    cur = Project(cur, step);
    basis = next;
    n = rank;
  }

  out.reduced_n = n;
  out.basis = basis;
  if (n < p.n) {
    const MatrixXd f = MatrixXd::Identity(p.n, p.n) - basis * basis.transpose();
    out.exposing = SymMat::FromDense(0.5 * (f + f.transpose()));
  }
  out.reduced.n = n;
  out.reduced.q = n > 0 ? Congruence(p.q, basis) : SymMat(0);
  out.reduced.h = n > 0 ? Congruence(p.h, basis) : SymMat(0);
  out.reduced.bset = n > 0 ? Project(p.bset, basis) : ConstraintSet{};
  out.reduced.bset.n = n;
  if (n == 0) out.reduced.bset.members.clear();
  return out;
}

PruneResult RemoveRedundant(const ConstraintSet& s, double tol) {
  PruneResult out;
  const int m = static_cast<int>(s.size());
  const bool all_zero =
      m > 0 && std::all_of(s.members.begin(), s.members.end(),
                           [](const SymMat& b) { return b.IsZero(); });
  std::vector<int> alive;
  for (int k = 0; k < m; ++k) {
    if (!all_zero && IsPsd(s.members[k], tol)) {
      out.removed_indices.push_back(k);
    } else {
      alive.push_back(k);
    }
  }
  if (all_zero) {
    // {O}: keep a single representative.
    alive.resize(1);
    for (int k = 1; k < m; ++k) out.removed_indices.push_back(k);
  }

  const int a = static_cast<int>(alive.size());
  // incl[i][j]: J_+(member j) contained in J_+(member i), i.e. i is
  // dominated by j.
  std::vector<std::vector<bool>> incl(a, std::vector<bool>(a, false));
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < a; ++j) {
      if (i == j) continue;
      incl[i][j] = Includes(s.members[alive[i]], s.members[alive[j]], tol);
    }
  }
  std::vector<bool> drop(a, false);
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < a && !drop[i]; ++j) {
      if (i == j || !incl[i][j]) continue;
      if (!incl[j][i]) {
        drop[i] = true;  // strictly dominated
      } else if (PackedLess(s.members[alive[j]], s.members[alive[i]])) {
        drop[i] = true;  // equivalent; keep the smaller representative
      }
    }
  }
  // A strictly dominated member's dominator may itself be dropped as an
  // equivalent; the kept representative dominates it equally, so the result
  // is still a valid reduction.
  out.kept.n = s.n;
  out.kept.family = s.family;
  out.kept.truncation = s.truncation;
  for (int i = 0; i < a; ++i) {
    if (drop[i]) {
      out.removed_indices.push_back(alive[i]);
    } else {
      out.kept_indices.push_back(alive[i]);
      out.kept.members.push_back(s.members[alive[i]]);
    }
  }
  std::sort(out.removed_indices.begin(), out.removed_indices.end());
  return out;
}

}  // namespace exactsdp
