#include "exactsdp/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace exactsdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr long kBlock = 4096;
constexpr int kTopPerBlock = 4;
constexpr int kPolishSteps = 100;
constexpr int kRestoreSteps = 50;
constexpr double kFeasTol = 1e-10;

// Quadratic objective and constraints in local coordinates w. On the sphere
// w is the whole homogeneous vector; in the plane w = u and the homogeneous
// vector is (u, 1).
struct LocalProblem {
  MatrixXd f;
  std::vector<MatrixXd> g;
  std::vector<double> g_scale;
  bool sphere = true;
  Rect box;

  VectorXd Lift(const VectorXd& w) const {
    if (sphere) return w;
    VectorXd v(w.size() + 1);
    v << w, 1.0;
    return v;
  }
  double Eval(const MatrixXd& m, const VectorXd& w) const {
    const VectorXd v = Lift(w);
    return v.dot(m * v);
  }
  VectorXd Grad(const MatrixXd& m, const VectorXd& w) const {
    const VectorXd v = Lift(w);
    return 2.0 * (m * v).head(w.size());
  }
  VectorXd Retract(VectorXd w) const {
    if (sphere) return w / w.norm();
    w(0) = std::clamp(w(0), box.x_lo, box.x_hi);
    w(1) = std::clamp(w(1), box.y_lo, box.y_hi);
    return w;
  }
  VectorXd Tangent(const VectorXd& w, const VectorXd& d) const {
    return sphere ? VectorXd(d - w.dot(d) * w) : d;
  }
  // Largest scaled violation, 0 when feasible.
  double Violation(const VectorXd& w) const {
    double v = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      v = std::max(v, -Eval(g[k], w) / g_scale[k]);
    }
    return v;
  }
  bool Feasible(const VectorXd& w) const { return Violation(w) <= kFeasTol; }
};

// Gauss-Newton on the violated constraints, treated as equalities.
bool Restore(const LocalProblem& lp, VectorXd& w) {
  for (int it = 0; it < kRestoreSteps; ++it) {
    std::vector<int> bad;
    for (std::size_t k = 0; k < lp.g.size(); ++k) {
      if (lp.Eval(lp.g[k], w) < -0.01 * kFeasTol * lp.g_scale[k]) {
        bad.push_back(static_cast<int>(k));
      }
    }
    if (bad.empty()) return true;
    const int rows = static_cast<int>(bad.size()) + (lp.sphere ? 1 : 0);
    MatrixXd j(rows, w.size());
    VectorXd r(rows);
    for (std::size_t b = 0; b < bad.size(); ++b) {
      j.row(b) = lp.Grad(lp.g[bad[b]], w).transpose();
      r(b) = -lp.Eval(lp.g[bad[b]], w);
    }
    if (lp.sphere) {
      j.row(rows - 1) = w.transpose();
      r(rows - 1) = 0.0;
    }
    const VectorXd step = j.completeOrthogonalDecomposition().solve(r);
    if (!step.allFinite() || step.norm() < 1e-300) return false;
    w = lp.Retract(w + step);
  }
  return lp.Feasible(w);
}

// Projects d onto the null space of the rows of `a`.
VectorXd NullProject(const MatrixXd& a, const VectorXd& d) {
  if (a.rows() == 0) return d;
  const VectorXd coef =
      (a * a.transpose()).completeOrthogonalDecomposition().solve(a * d);
  return d - a.transpose() * coef;
}

// Projected descent from a feasible point. Returns the final objective.
double Polish(const LocalProblem& lp, VectorXd& w) {
  double fw = lp.Eval(lp.f, w);
  double eta = 1.0 / (2.0 * lp.f.norm() + 1.0);
  for (int it = 0; it < kPolishSteps; ++it) {
    const VectorXd grad = lp.Tangent(w, lp.Grad(lp.f, w));
    if (grad.norm() < 1e-14) break;
    std::vector<VectorXd> active;
    for (std::size_t k = 0; k < lp.g.size(); ++k) {
      if (lp.Eval(lp.g[k], w) <= 1e-8 * lp.g_scale[k]) {
        active.push_back(lp.Tangent(w, lp.Grad(lp.g[k], w)));
      }
    }
    MatrixXd a(active.size() + (lp.sphere ? 1 : 0), w.size());
    for (std::size_t k = 0; k < active.size(); ++k) a.row(k) = active[k].transpose();
    if (lp.sphere) a.row(a.rows() - 1) = w.transpose();
    const VectorXd d_proj = -NullProject(a, grad);
    const VectorXd d_free = -grad;

    bool moved = false;
    for (const VectorXd* d : {&d_proj, &d_free}) {
      if (d->norm() < 1e-14) continue;
      double t = eta;
      for (int bt = 0; bt < 40 && !moved; ++bt, t *= 0.5) {
        VectorXd trial = lp.Retract(w + t * *d);
        if (!Restore(lp, trial)) continue;
        const double ft = lp.Eval(lp.f, trial);
        if (ft < fw) {
          w = trial;
          fw = ft;
          eta = 2.0 * t;
          moved = true;
        }
      }
      if (moved) break;
    }
    if (!moved) break;
  }
  return fw;
}

// Newton on the KKT system of the constraints with |g_k(w)| <= near, taken
// as equalities. Kept only if the result is feasible, nearby and not worse.
double RefineKktOnce(const LocalProblem& lp, VectorXd& w, double fw, double near) {
  const int d = static_cast<int>(w.size());
  std::vector<int> act;
  for (std::size_t k = 0; k < lp.g.size(); ++k) {
    if (std::abs(lp.Eval(lp.g[k], w)) <= near * lp.g_scale[k]) act.push_back(static_cast<int>(k));
  }
  const int extra = lp.sphere ? 1 : 0;
  const int m = static_cast<int>(act.size()) + extra;
  if (m == 0 || m > d) return fw;
  auto constraint_grads = [&](const VectorXd& x) {
    MatrixXd a(d, m);
    for (int k = 0; k < static_cast<int>(act.size()); ++k) a.col(k) = lp.Grad(lp.g[act[k]], x);
    if (lp.sphere) a.col(m - 1) = 2.0 * x;
    return a;
  };
  VectorXd x = w;
  VectorXd mu = constraint_grads(x).completeOrthogonalDecomposition().solve(lp.Grad(lp.f, x));
  for (int it = 0; it < 30; ++it) {
    const MatrixXd a = constraint_grads(x);
    VectorXd r(d + m);
    r.head(d) = lp.Grad(lp.f, x) - a * mu;
    for (int k = 0; k < static_cast<int>(act.size()); ++k) r(d + k) = lp.Eval(lp.g[act[k]], x);
    if (lp.sphere) r(d + m - 1) = x.squaredNorm() - 1.0;
    if (r.norm() < 1e-15) break;
    MatrixXd hess = 2.0 * lp.f.topLeftCorner(d, d);
    for (int k = 0; k < static_cast<int>(act.size()); ++k) hess -= 2.0 * mu(k) * lp.g[act[k]].topLeftCorner(d, d);
    if (lp.sphere) hess -= 2.0 * mu(m - 1) * MatrixXd::Identity(d, d);
    MatrixXd jac = MatrixXd::Zero(d + m, d + m);
    jac.topLeftCorner(d, d) = hess;
    jac.topRightCorner(d, m) = -a;
    jac.bottomLeftCorner(m, d) = a.transpose();
    const VectorXd step = jac.fullPivLu().solve(-r);
    if (!step.allFinite()) return fw;
    x += step.head(d);
    mu += step.tail(m);
  }
  if (lp.sphere) x /= x.norm();
  if ((x - w).norm() > 0.25 * (1.0 + w.norm()) || !lp.Feasible(x)) return fw;
  if (!lp.sphere && lp.Retract(x) != x) return fw;
  const double fx = lp.Eval(lp.f, x);
  if (fx >= fw) return fw;
  w = x;
  return fx;
}

// Projected descent can stall a little off a curved boundary, so nearly
// active constraints are tried as well.
double RefineKkt(const LocalProblem& lp, VectorXd& w, double fw) {
  for (double near : {1e-6, 1e-3, 1e-2}) fw = RefineKktOnce(lp, w, fw, near);
  return fw;
}

void CanonicalSign(VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) {
      if (x(i) < 0.0) x = -x;
      return;
    }
  }
}

struct Candidate {
  double score;
  long index;
};

}  // namespace

bool InRegion(const ConstraintSet& s, const VectorXd& u, double slack) {
  for (const SymMat& b : s.members) {
    if (EvalQuadratic(u, 1.0, b) < -slack) return false;
  }
  return true;
}

OracleResult SolveSphere(const GeoCop& p, long samples, std::uint64_t seed) {
  p.Validate();
  const int n = p.n;
  if (n > 6) throw std::invalid_argument("SolveSphere: n must be at most 6");
  if (samples <= 0) throw std::invalid_argument("SolveSphere: samples must be positive");
  const MatrixXd h = p.h.ToDense();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  if (es.eigenvalues()(0) <= 1e-12 * std::max(1.0, es.eigenvalues()(n - 1))) {
    throw std::invalid_argument("SolveSphere: H must be positive definite");
  }
  Eigen::LLT<MatrixXd> llt(h);
  // x = L^{-T} s gives x^T H x = s^T s.
  const MatrixXd r_inv =
      llt.matrixU().solve(MatrixXd::Identity(n, n));

  LocalProblem lp;
  lp.sphere = true;
  lp.f = r_inv.transpose() * p.q.ToDense() * r_inv;
  for (const SymMat& b : p.bset.members) {
    MatrixXd gb = r_inv.transpose() * b.ToDense() * r_inv;
    lp.g_scale.push_back(std::max(1.0, gb.norm()));
    lp.g.push_back(std::move(gb));
  }
  const double rho = 10.0 * (lp.f.norm() + 1.0);

  OracleResult out;
  out.samples_used = samples;
  double raw_best = std::numeric_limits<double>::infinity();
  double best = raw_best;
  double best_w = raw_best;
  VectorXd best_x;

  const long blocks = (samples + kBlock - 1) / kBlock;
  for (long blk = 0; blk < blocks; ++blk) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed),
                     static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(blk)};
    std::mt19937_64 rng(ss);
    std::normal_distribution<double> normal;
    std::vector<Candidate> top;
    const long count = std::min(kBlock, samples - blk * kBlock);
    VectorXd s(n);
    for (long k = 0; k < count; ++k) {
      for (int i = 0; i < n; ++i) s(i) = normal(rng);
      const double len = s.norm();
      if (!(len > 0.0)) continue;
      s /= len;
      const double f = lp.Eval(lp.f, s);
      const double viol = lp.Violation(s);
      if (viol <= kFeasTol && f < raw_best) raw_best = f;
      const double score = f + rho * viol;

      if (static_cast<int>(top.size()) == kTopPerBlock) {
        auto worst = std::max_element(
            top.begin(), top.end(),
            [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
        if (score >= worst->score) continue;
        *worst = {score, k};
      } else {
        top.push_back({score, k});
      }
      VectorXd w = s;
      if (!Restore(lp, w)) continue;
      RefineKkt(lp, w, Polish(lp, w));
      // Compare in the original coordinates so the reported value is the
      // exact running minimum.
      VectorXd x = r_inv * w;
      const double fx = QuadraticForm(p.q, x);
      if (fx < best) {
        best = fx;
        best_x = std::move(x);
        best_w = lp.Eval(lp.f, w);
      }
    }
  }

  if (best_x.size() == 0) return out;
  out.feasible = true;
  out.refined = best_w < raw_best;
  CanonicalSign(best_x);
  out.argmin = best_x;
  out.value = best;
  return out;
}

OracleResult SolveRegion2d(const ConstraintSet& s, const SymMat& q_obj,
                           const Rect& box, int resolution) {
  if (q_obj.n() != 3) throw std::invalid_argument("SolveRegion2d: need n == 3");
  if (s.n != 0 && s.n != 3) throw std::invalid_argument("SolveRegion2d: members must be 3 x 3");
  for (const SymMat& b : s.members) {
    if (b.n() != 3) throw std::invalid_argument("SolveRegion2d: members must be 3 x 3");
  }
  if (resolution <= 0) throw std::invalid_argument("SolveRegion2d: resolution must be positive");
  if (!(box.x_lo < box.x_hi) || !(box.y_lo < box.y_hi)) {
    throw std::invalid_argument("SolveRegion2d: empty box");
  }

  LocalProblem lp;
  lp.sphere = false;
  lp.box = box;
  lp.f = q_obj.ToDense();
  for (const SymMat& b : s.members) {
    lp.g.push_back(b.ToDense());
    lp.g_scale.push_back(std::max(1.0, b.FrobeniusNorm()));
  }

  const double dx = (box.x_hi - box.x_lo) / resolution;
  const double dy = (box.y_hi - box.y_lo) / resolution;
  std::vector<std::pair<double, VectorXd>> top;
  long feasible = 0;
  VectorXd u(2);
  for (int iy = 0; iy < resolution; ++iy) {
    u(1) = box.y_lo + (iy + 0.5) * dy;
    for (int ix = 0; ix < resolution; ++ix) {
      u(0) = box.x_lo + (ix + 0.5) * dx;
      bool in = true;
      for (const MatrixXd& g : lp.g) {
        if (lp.Eval(g, u) < 0.0) {
          in = false;
          break;
        }
      }
      if (!in) continue;
      ++feasible;
      const double f = lp.Eval(lp.f, u);
      if (static_cast<int>(top.size()) < 8) {
        top.emplace_back(f, u);
      } else {
        auto worst = std::max_element(
            top.begin(), top.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
        if (f < worst->first) *worst = {f, u};
      }
    }
  }

  OracleResult out;
  out.samples_used = static_cast<long>(resolution) * resolution;
  out.feasible_fraction = static_cast<double>(feasible) / out.samples_used;
  if (top.empty()) return out;
  out.feasible = true;
  double raw_best = std::numeric_limits<double>::infinity();
  double best = raw_best;
  for (auto& [f, w] : top) {
    raw_best = std::min(raw_best, f);
    VectorXd v = w;
    const double fv = RefineKkt(lp, v, Polish(lp, v));
    if (fv < best) {
      best = fv;
      out.argmin = v;
    }
  }
  out.refined = best < raw_best;
  out.value = lp.Eval(lp.f, out.argmin);
  return out;
}

}  // namespace exactsdp
