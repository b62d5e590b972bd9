#include "exactsdp/sdp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace exactsdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kStepFraction = 0.98;
constexpr double kTighten = 1e-3;
constexpr int kExtraSteps = 6;
constexpr double kRayTol = 1e-6;

double DenseInner(const MatrixXd& a, const MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

MatrixXd Sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Factor X = L L^T through the spectral decomposition, also returning L^{-1}.
// Returns false if X is not numerically positive definite.
bool SpectralFactor(const MatrixXd& x, MatrixXd* l, MatrixXd* l_inv) {
  const EigDecomp e = EigSym(x);
  const Eigen::Index n = x.rows();
  if (n == 0) {
    *l = MatrixXd(0, 0);
    *l_inv = MatrixXd(0, 0);
    return true;
  }
  if (!(e.values(n - 1) > 0.0)) return false;
  const VectorXd root = e.values.array().sqrt();
  *l = e.vectors * root.asDiagonal();
  *l_inv = root.cwiseInverse().asDiagonal() * e.vectors.transpose();
  return true;
}

double MaxStepPsd(const MatrixXd& l_inv, const MatrixXd& dx) {
  if (dx.rows() == 0) return std::numeric_limits<double>::infinity();
  const MatrixXd m = Sym(l_inv * dx * l_inv.transpose());
  const EigDecomp e = EigSym(m);
  const double lmin = e.values(e.values.size() - 1);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double MaxStepLin(const VectorXd& x, const VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

double LambdaMinDense(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  const EigDecomp e = EigSym(m);
  return e.values(e.values.size() - 1);
}

struct Iterate {
  MatrixXd x, z;
  VectorXd xl, zl, y;
};

struct Data {
  int n = 0;
  int m = 0;
  int p = 0;
  MatrixXd c;
  VectorXd cl;
  std::vector<MatrixXd> a;
  MatrixXd al;
  VectorXd b;
  double norm_b = 0.0;
  double norm_c = 0.0;

  VectorXd OpA(const MatrixXd& x, const VectorXd& xl) const {
    VectorXd r(m);
    for (int i = 0; i < m; ++i) r(i) = DenseInner(a[i], x);
    if (p > 0) r += al * xl;
    return r;
  }
  MatrixXd OpAt(const VectorXd& y) const {
    MatrixXd r = MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) r += y(i) * a[i];
    return r;
  }
};

Data Prepare(const ConicForm& p) {
  Data d;
  d.n = p.n;
  d.m = static_cast<int>(p.a.size());
  d.p = static_cast<int>(p.c_lin.size());
  if (p.n < 0 || p.c.n() != p.n) {
    throw std::invalid_argument("SolveConic: objective has wrong order");
  }
  if (p.b.size() != d.m) {
    throw std::invalid_argument("SolveConic: rhs length differs from row count");
  }
  if (d.p > 0 && (p.a_lin.rows() != d.m || p.a_lin.cols() != d.p)) {
    throw std::invalid_argument("SolveConic: a_lin has wrong shape");
  }
  if (d.m == 0) throw std::invalid_argument("SolveConic: no constraints");
  if (!p.c.AllFinite() || !p.b.allFinite() || !p.c_lin.allFinite() ||
      (d.p > 0 && !p.a_lin.allFinite())) {
    throw std::invalid_argument("SolveConic: non-finite data");
  }
  d.c = p.c.ToDense();
  d.cl = p.c_lin;
  d.al = d.p > 0 ? p.a_lin : MatrixXd::Zero(d.m, 0);
  d.b = p.b;
  for (const SymMat& ai : p.a) {
    if (ai.n() != p.n) {
      throw std::invalid_argument("SolveConic: constraint has wrong order");
    }
    if (!ai.AllFinite()) throw std::invalid_argument("SolveConic: non-finite data");
    d.a.push_back(ai.ToDense());
  }
  d.norm_b = d.b.norm();
  d.norm_c = std::sqrt(d.c.squaredNorm() + d.cl.squaredNorm());
  return d;
}

Iterate StartingPoint(const Data& d) {
  // Scaled identity start in the style of SDPT3.
  const int dim = std::max(1, d.n + d.p);
  double xi = std::max(10.0, std::sqrt(static_cast<double>(dim)));
  double zeta = std::max(xi, d.norm_c);
  for (int i = 0; i < d.m; ++i) {
    const double na = std::sqrt(d.a[i].squaredNorm() + d.al.row(i).squaredNorm());
    xi = std::max(xi, dim * (1.0 + std::abs(d.b(i))) / (1.0 + na));
    zeta = std::max(zeta, na);
  }
  zeta = std::max(zeta, std::sqrt(static_cast<double>(dim)) *
                            (1.0 + d.norm_c) / std::sqrt(static_cast<double>(dim)));
  Iterate it;
  it.x = xi * MatrixXd::Identity(d.n, d.n);
  it.z = zeta * MatrixXd::Identity(d.n, d.n);
  it.xl = VectorXd::Constant(d.p, xi);
  it.zl = VectorXd::Constant(d.p, zeta);
  it.y = VectorXd::Zero(d.m);
  return it;
}

struct Measure {
  VectorXd rp;
  MatrixXd rd;
  VectorXd rdl;
  double pobj = 0.0;
  double dobj = 0.0;
  Residuals res;
};

Measure Evaluate(const Data& d, const Iterate& it) {
  Measure m;
  m.rp = d.b - d.OpA(it.x, it.xl);
  m.rd = d.c - d.OpAt(it.y) - it.z;
  m.rdl = d.cl - d.al.transpose() * it.y - it.zl;
  m.pobj = DenseInner(d.c, it.x) + d.cl.dot(it.xl);
  m.dobj = d.b.dot(it.y);
  m.res.primal = m.rp.norm() / (1.0 + d.norm_b);
  m.res.dual =
      std::sqrt(m.rd.squaredNorm() + m.rdl.squaredNorm()) / (1.0 + d.norm_c);
  m.res.gap = std::abs(m.pobj - m.dobj) / (1.0 + std::abs(m.pobj) + std::abs(m.dobj));
  return m;
}

// Checks whether the current dual iterate points along a Farkas ray proving
// primal infeasibility.
std::optional<VectorXd> InfeasibilityRay(const Data& d, const VectorXd& y) {
  const double ny = y.norm();
  if (!(ny > 0.0)) return std::nullopt;
  const VectorXd yh = y / ny;
  const double by = d.b.dot(yh);
  if (by <= kRayTol) return std::nullopt;
  const double viol_psd = -LambdaMinDense(-d.OpAt(yh));
  double viol_lin = 0.0;
  if (d.p > 0) viol_lin = (d.al.transpose() * yh).maxCoeff();
  if (viol_psd <= kRayTol * by && viol_lin <= kRayTol * by) return yh / by;
  return std::nullopt;
}

std::optional<std::pair<MatrixXd, VectorXd>> UnboundedRay(const Data& d,
                                                          const Iterate& it) {
  const double nx = std::sqrt(it.x.squaredNorm() + it.xl.squaredNorm());
  if (!(nx > 0.0)) return std::nullopt;
  const MatrixXd xh = it.x / nx;
  const VectorXd xlh = it.xl / nx;
  const double cx = DenseInner(d.c, xh) + d.cl.dot(xlh);
  if (cx >= -kRayTol) return std::nullopt;
  const double viol = d.OpA(xh, xlh).norm();
  if (viol <= kRayTol * std::abs(cx)) return std::make_pair(xh, xlh);
  return std::nullopt;
}

ConicSolution Package(const Data& d, const Iterate& it, const Measure& m,
                      SdpStatus status, int iters, std::vector<Residuals> history) {
  ConicSolution s;
  s.history = std::move(history);
  s.status = status;
  s.x = SymMat::FromDense(Sym(it.x));
  s.z = SymMat::FromDense(Sym(it.z));
  s.x_lin = it.xl;
  s.z_lin = it.zl;
  s.y = it.y;
  s.primal_value = m.pobj;
  s.dual_value = m.dobj;
  s.residuals = m.res;
  s.iterations = iters;
  (void)d;
  return s;
}

}  // namespace

std::string StatusName(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kInfeasible:
      return "infeasible";
    case SdpStatus::kUnbounded:
      return "unbounded";
    case SdpStatus::kMaxIter:
      return "max_iter";
    case SdpStatus::kNumerical:
      return "numerical";
  }
  return "numerical";
}

ConicSolution SolveConic(const ConicForm& problem, const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("SolveConic: tol must be > 0");
  if (opts.max_iter < 1) {
    throw std::invalid_argument("SolveConic: max_iter must be positive");
  }
  const Data d = Prepare(problem);
  const int n = d.n;
  const int m = d.m;
  const double dim = std::max(1, n + d.p);

  Iterate it = StartingPoint(d);
  Iterate best = it;
  Measure best_m = Evaluate(d, it);
  double best_score = best_m.res.Max();
  std::vector<Residuals> history;
  int reached_at = -1;
  int best_iter = 0;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const Measure meas = Evaluate(d, it);
    // Once within tolerance, a few more steps toward tol * kTighten while
    // the residuals keep halving.
    if (reached_at >= 0 &&
        (meas.res.Max() > 0.5 * best_score || iter - reached_at > kExtraSteps)) {
      return Package(d, best, best_m, SdpStatus::kOptimal, best_iter, history);
    }
    history.push_back(meas.res);
    if (meas.res.Max() < best_score) {
      best = it;
      best_m = meas;
      best_score = meas.res.Max();
      best_iter = iter;
    }
    if (meas.res.Max() <= opts.tol * kTighten) {
      return Package(d, it, meas, SdpStatus::kOptimal, iter, history);
    }
    if (reached_at < 0 && meas.res.Max() <= opts.tol) reached_at = iter;

    const double scale = 1.0 + d.norm_c + d.norm_b;
    if (reached_at < 0 && it.y.norm() > 1e6 * scale) {
      if (auto ray = InfeasibilityRay(d, it.y)) {
        ConicSolution s = Package(d, it, meas, SdpStatus::kInfeasible, iter, history);
        s.infeasibility_ray = ray;
        return s;
      }
    }
    if (reached_at < 0 && it.x.norm() + it.xl.norm() > 1e6 * scale) {
      if (auto ray = UnboundedRay(d, it)) {
        ConicSolution s = Package(d, it, meas, SdpStatus::kUnbounded, iter, history);
        s.unbounded_ray = std::make_pair(SymMat::FromDense(Sym(ray->first)),
                                         ray->second);
        return s;
      }
    }

    // NT scaling point: G^T Z G = G^{-1} X G^{-T} = diag(v).
    MatrixXd lx, lx_inv, lz, lz_inv;
    if (!SpectralFactor(it.x, &lx, &lx_inv) || !SpectralFactor(it.z, &lz, &lz_inv)) {
      break;
    }
    MatrixXd g(n, n), g_inv(n, n);
    VectorXd v(n);
    if (n > 0) {
      Eigen::JacobiSVD<MatrixXd> svd(lz.transpose() * lx,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
      v = svd.singularValues();
      if (!(v.minCoeff() > 0.0)) break;
      const VectorXd vs = v.array().sqrt();
      g = lx * svd.matrixV() * vs.cwiseInverse().asDiagonal();
      g_inv = vs.asDiagonal() * svd.matrixV().transpose() * lx_inv;
    }
    const MatrixXd w = g * g.transpose();
    const VectorXd ratio = it.xl.cwiseQuotient(it.zl);

    // Schur complement.
    std::vector<MatrixXd> waw(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) waw[j] = w * d.a[j] * w;
    MatrixXd schur(m, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i <= j; ++i) {
        double s = DenseInner(d.a[i], waw[j]);
        if (d.p > 0) s += (d.al.row(i).transpose().cwiseProduct(ratio)).dot(d.al.row(j));
        schur(i, j) = schur(j, i) = s;
      }
    }
    Eigen::LDLT<MatrixXd> ldlt(schur);
    // The Schur complement becomes ill-conditioned near degenerate optima;
    // LDLT with iterative refinement keeps the directions accurate there.
    // COD is the fallback for a failed factorization.
    const bool use_pinv = ldlt.info() != Eigen::Success;
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
    if (use_pinv) cod.compute(schur);
    auto solve_schur = [&](const VectorXd& rhs) -> VectorXd {
      if (use_pinv) return cod.solve(rhs);
      VectorXd x = ldlt.solve(rhs);
      for (int r = 0; r < 2 && x.allFinite(); ++r) x += ldlt.solve(rhs - schur * x);
      if (!x.allFinite()) x = schur.completeOrthogonalDecomposition().solve(rhs);
      return x;
    };

    const MatrixXd w_rd_w = w * meas.rd * w;
    const double mu = (DenseInner(it.x, it.z) + it.xl.dot(it.zl)) / dim;

    struct Direction {
      MatrixXd dx, dz;
      VectorXd dxl, dzl, dy;
    };
    // rc: scaled complementarity residual; rl: linear-block counterpart.
    auto direction = [&](const MatrixXd& rc, const VectorXd& rl) -> Direction {
      MatrixXd rt(n, n);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) rt(i, j) = 2.0 * rc(i, j) / (v(i) + v(j));
      }
      const MatrixXd t = g * rt * g.transpose();
      VectorXd rhs = meas.rp;
      for (int i = 0; i < m; ++i) {
        rhs(i) += -DenseInner(d.a[i], t) + DenseInner(d.a[i], w_rd_w);
      }
      if (d.p > 0) {
        rhs += -d.al * rl.cwiseQuotient(it.zl) + d.al * ratio.cwiseProduct(meas.rdl);
      }
      Direction dir;
      dir.dy = solve_schur(rhs);
      dir.dz = meas.rd - d.OpAt(dir.dy);
      dir.dzl = meas.rdl - d.al.transpose() * dir.dy;
      dir.dx = Sym(t - w * dir.dz * w);
      dir.dxl = rl.cwiseQuotient(it.zl) - ratio.cwiseProduct(dir.dzl);
      return dir;
    };
    auto steps = [&](const Direction& dir) {
      const double ap = std::min({1.0, kStepFraction * MaxStepPsd(lx_inv, dir.dx),
                                  kStepFraction * MaxStepLin(it.xl, dir.dxl)});
      const double ad = std::min({1.0, kStepFraction * MaxStepPsd(lz_inv, dir.dz),
                                  kStepFraction * MaxStepLin(it.zl, dir.dzl)});
      return std::make_pair(ap, ad);
    };

    const MatrixXd v2 = (v.array() * v.array()).matrix().asDiagonal();
    const Direction aff = direction(-v2, -it.xl.cwiseProduct(it.zl));
    const auto [ap_aff, ad_aff] = steps(aff);
    const double mu_aff =
        (DenseInner(it.x + ap_aff * aff.dx, it.z + ad_aff * aff.dz) +
         (it.xl + ap_aff * aff.dxl).dot(it.zl + ad_aff * aff.dzl)) /
        dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    MatrixXd corr(n, n);
    if (n > 0) {
      const MatrixXd dxs = g_inv * aff.dx * g_inv.transpose();
      const MatrixXd dzs = g.transpose() * aff.dz * g;
      corr = Sym(dxs * dzs);
    }
    const MatrixXd rc =
        sigma * mu * MatrixXd::Identity(n, n) - v2 - corr;
    const VectorXd rl = VectorXd::Constant(d.p, sigma * mu) -
                        it.xl.cwiseProduct(it.zl) - aff.dxl.cwiseProduct(aff.dzl);
    const Direction dir = direction(rc, rl);
    // Equal primal and dual steps keep the infeasibilities and mu shrinking
    // together, which matters when the primal has no interior point.
    auto [ap, ad] = steps(dir);
    ap = ad = std::min(ap, ad);
    if (!dir.dy.allFinite() || !dir.dx.allFinite() || !dir.dz.allFinite()) break;
    if (ap < 1e-12 && ad < 1e-12) break;

    it.x = Sym(it.x + ap * dir.dx);
    it.xl += ap * dir.dxl;
    it.y += ad * dir.dy;
    it.z = Sym(it.z + ad * dir.dz);
    it.zl += ad * dir.dzl;
  }

  const Measure last = Evaluate(d, it);
  if (last.res.Max() < best_score) {
    best = it;
    best_m = last;
    best_score = last.res.Max();
  }
  if (best_score <= opts.tol) {
    return Package(d, best, best_m, SdpStatus::kOptimal, opts.max_iter, history);
  }
  if (auto ray = InfeasibilityRay(d, it.y); ray && last.res.primal > opts.tol) {
    ConicSolution s = Package(d, it, last, SdpStatus::kInfeasible, opts.max_iter, history);
    s.infeasibility_ray = ray;
    return s;
  }
  if (auto ray = UnboundedRay(d, it); ray && last.res.dual > opts.tol) {
    ConicSolution s = Package(d, it, last, SdpStatus::kUnbounded, opts.max_iter, history);
    s.unbounded_ray = std::make_pair(SymMat::FromDense(Sym(ray->first)), ray->second);
    return s;
  }
  if (last.res.Max() < best_score) {
    best = it;
    best_m = last;
  }
  return Package(d, best, best_m, SdpStatus::kMaxIter, opts.max_iter, history);
}

SdpSolution Solve(const SdpProblem& p, double tol, int max_iter) {
  if (p.objective.n() != p.n) {
    throw std::invalid_argument("Solve: objective has wrong order");
  }
  ConicForm f;
  f.n = p.n;
  f.c = p.objective;
  int slacks = 0;
  for (const auto& c : p.ineq_constraints) {
    if (c.sense != Sense::kEq) ++slacks;
  }
  const int rows = static_cast<int>(p.eq_constraints.size() + p.ineq_constraints.size());
  f.c_lin = Eigen::VectorXd::Zero(slacks);
  f.a_lin = Eigen::MatrixXd::Zero(rows, slacks);
  f.b.resize(rows);
  int row = 0;
  for (const auto& [a, rhs] : p.eq_constraints) {
    if (!std::isfinite(rhs)) throw std::invalid_argument("Solve: non-finite rhs");
    f.a.push_back(a);
    f.b(row++) = rhs;
  }
  int k = 0;
  for (const auto& c : p.ineq_constraints) {
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("Solve: non-finite rhs");
    f.a.push_back(c.a);
    if (c.sense == Sense::kGe) f.a_lin(row, k++) = -1.0;
    if (c.sense == Sense::kLe) f.a_lin(row, k++) = 1.0;
    f.b(row++) = c.rhs;
  }
  const ConicSolution cs = SolveConic(f, SolverOptions{tol, max_iter});
  SdpSolution s;
  s.status = cs.status;
  s.x = cs.x;
  s.value = cs.primal_value;
  s.dual_value = cs.dual_value;
  s.residuals = cs.residuals;
  s.iterations = cs.iterations;
  s.infeasibility_ray = cs.infeasibility_ray;
  if (cs.unbounded_ray) s.unbounded_ray = cs.unbounded_ray->first;
  const std::size_t neq = p.eq_constraints.size();
  for (std::size_t i = 0; i < neq; ++i) s.dual_eq.push_back(cs.y(i));
  for (std::size_t j = 0; j < p.ineq_constraints.size(); ++j) {
    const double y = cs.y(neq + j);
    s.dual_ineq.push_back(p.ineq_constraints[j].sense == Sense::kLe ? -y : y);
  }
  return s;
}

bool Usable(const SdpSolution& s, double loose) {
  if (s.status == SdpStatus::kOptimal) return true;
  return (s.status == SdpStatus::kMaxIter || s.status == SdpStatus::kNumerical) &&
         s.residuals.Max() <= loose;
}

bool Usable(const ConicSolution& s, double loose) {
  if (s.status == SdpStatus::kOptimal) return true;
  return (s.status == SdpStatus::kMaxIter || s.status == SdpStatus::kNumerical) &&
         s.residuals.Max() <= loose;
}

SymMat CenterOnFace(const SymMat& x,
                    const std::vector<std::pair<SymMat, double>>& equalities,
                    const SymMat& objective) {
  const EigDecomp e = EigSym(x);
  const double cut = 1e-7 * std::max(e.values(0), 0.0);
  int r = 0;
  while (r < x.n() && e.values(r) > cut) ++r;
  if (r == 0) return x;
  const MatrixXd v = e.vectors.leftCols(r);
  MatrixXd p = RangeBasis(v, 1e-4);
  const MatrixXd xd = x.ToDense();
  if ((xd - p * p.transpose() * xd * p * p.transpose()).norm() > 1e-4 * xd.norm()) {
    p = RangeBasis(v);
  }

  std::vector<MatrixXd> g;
  std::vector<double> target;
  for (const auto& [m, rhs] : equalities) {
    g.push_back(p.transpose() * m.ToDense() * p);
    target.push_back(rhs);
  }
  MatrixXd u = p.transpose() * xd * p;
  u = Sym(u);
  {
    // Keep the level of the objective unless the equalities already fix it.
    const MatrixXd lev = p.transpose() * objective.ToDense() * p;
    MatrixXd span(r * r, static_cast<Eigen::Index>(g.size()));
    for (std::size_t k = 0; k < g.size(); ++k) {
      span.col(static_cast<Eigen::Index>(k)) = g[k].reshaped();
    }
    const VectorXd lv = lev.reshaped();
    double resid = lv.norm();
    if (!g.empty()) {
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(span);
      resid = (span * cod.solve(lv) - lv).norm();
    }
    if (resid > 1e-8 * std::max(1.0, lv.norm())) {
      g.push_back(lev);
      target.push_back(DenseInner(lev, u));
    }
  }
  const int m = static_cast<int>(g.size());
  auto min_eig = [](const MatrixXd& a) {
    const EigDecomp d = EigSym(a);
    return d.values(d.values.size() - 1);
  };
  if (!(min_eig(u) > 0.0)) return x;
  for (int it = 0; it < 100; ++it) {
    MatrixXd mm(m, m);
    VectorXd rhs(m);
    std::vector<MatrixXd> ugu(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) ugu[k] = u * g[k] * u;
    for (int j = 0; j < m; ++j) {
      rhs(j) = 2.0 * DenseInner(g[j], u) - target[j];
      for (int k = 0; k < m; ++k) mm(j, k) = DenseInner(g[j], ugu[k]);
    }
    const VectorXd lam = m > 0 ? VectorXd(Eigen::CompleteOrthogonalDecomposition<MatrixXd>(mm).solve(rhs))
                               : VectorXd();
    MatrixXd step = u;
    for (int k = 0; k < m; ++k) step -= lam(k) * ugu[k];
    step = Sym(step);
    double alpha = 1.0;
    while (alpha > 1e-10 && !(min_eig(u + alpha * step) > 0.0)) alpha *= 0.5;
    if (alpha <= 1e-10) break;
    u = Sym(u + alpha * step);
    if (alpha == 1.0 && step.norm() <= 1e-15 * u.norm()) break;
  }
  if (!u.allFinite()) return x;
  return SymMat::FromDense(Sym(p * u * p.transpose()));
}

namespace {

constexpr int kGoldenIterations = 120;

// Maximizes the concave f over [0, 1].
template <class F>
double GoldenMax(F f) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < kGoldenIterations; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

void CheckPair(const SymMat& a, const SymMat& b) {
  if (a.n() != b.n()) {
    throw std::invalid_argument("ab certificate: dimension mismatch");
  }
}

}  // namespace

AbSearch SearchAbCertificate(const SymMat& a, const SymMat& b, double tol) {
  CheckPair(a, b);
  auto g = [&](double s) { return LambdaMin((1.0 - s) * a + s * b); };
  double s = std::clamp(GoldenMax(g), 1e-9, 1.0 - 1e-9);
  double tau = s / (1.0 - s);
  double margin = g(s);

  for (int q = 1; q <= 16; ++q) {
    const double p = std::round(tau * q);
    if (p <= 0.0) continue;
    const double cand = p / q;
    if (std::abs(cand - tau) > 1e-6 * std::max(1.0, tau)) continue;
    const double cs = cand / (1.0 + cand);
    const double cm = g(cs);
    if (cm >= margin - 1e-15 * (a.FrobeniusNorm() + b.FrobeniusNorm())) {
      tau = cand;
      margin = cm;
      break;
    }
  }

  AbSearch out;
  out.alpha = 1.0;
  out.beta = tau;
  out.margin = margin;
  out.found =
      LambdaMin(a + tau * b) >= -tol * (a.FrobeniusNorm() + b.FrobeniusNorm());
  return out;
}

std::optional<std::pair<double, double>> SolveAbCertificate(const SymMat& a,
                                                            const SymMat& b,
                                                            double tol) {
  const AbSearch s = SearchAbCertificate(a, b, tol);
  if (!s.found) return std::nullopt;
  return std::make_pair(s.alpha, s.beta);
}

AbSearch SearchAnySignCombination(const SymMat& a, const SymMat& b, double tol) {
  CheckPair(a, b);
  AbSearch best;
  best.margin = -std::numeric_limits<double>::infinity();
  for (double sa : {1.0, -1.0}) {
    for (double sb : {1.0, -1.0}) {
      auto g = [&](double s) {
        return LambdaMin((1.0 - s) * sa * a + s * sb * b);
      };
      const double s = GoldenMax(g);
      const double val = g(s);
      if (val > best.margin) {
        best.margin = val;
        best.alpha = (1.0 - s) * sa;
        best.beta = s * sb;
      }
    }
  }
  best.found = best.margin >= -tol * (a.FrobeniusNorm() + b.FrobeniusNorm());
  return best;
}

}  // namespace exactsdp
