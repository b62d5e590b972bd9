#include "exactsdp/certify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace exactsdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective value of a pair SDP, +inf when the feasible set is empty and NaN
// when the solver gave no usable answer.
double PairValue(const SdpSolution& s) {
  if (s.status == SdpStatus::kInfeasible) return kInf;
  if (Usable(s)) return s.value;
  return std::numeric_limits<double>::quiet_NaN();
}

SymMat ClipPsd(const SymMat& x) {
  const EigDecomp e = EigSym(x);
  const VectorXd d = e.values.cwiseMax(0.0);
  const MatrixXd m = e.vectors * d.asDiagonal() * e.vectors.transpose();
  return SymMat::FromDense(0.5 * (m + m.transpose()));
}

double Unit(const SymMat& b) {
  const double f = b.FrobeniusNorm();
  return f > 0.0 ? f : 1.0;
}

bool WitnessValid(const SymMat& x, const SymMat& a, const SymMat& b, double tol) {
  return LambdaMin(x) >= -tol && Inner(b, x) <= tol && std::abs(Inner(b, x)) <= tol &&
         Inner(a, x) <= -10.0 * tol;
}

// Refutation witness for J_0(b) in J_+(a): the SDP minimizer moved to the
// centre of its optimal face, falling back to the raw (clipped) minimizer.
SymMat Witness(const SymMat& x, const SymMat& a, const SymMat& b, double tol) {
  const SymMat raw = ClipPsd(x);
  SymMat c = CenterOnFace(raw, {{SymMat::Identity(x.n()), 1.0}, {b, 0.0}}, a);
  c = ClipPsd(c);
  if (WitnessValid(c, a, b, tol)) return c;
  return raw;
}

// q(u, 1, b) / ||b||_F.
double Qn(const VectorXd& u, const SymMat& b, double scale) {
  return EvalQuadratic(u, 1.0, b) / scale;
}

// Coordinate pattern search maximizing f over the box |x_k| <= box, from x0
// with initial step h.
template <class F>
VectorXd PatternMax(F f, VectorXd x, double h, double box) {
  double fx = f(x);
  for (int it = 0; it < 200000 && h > 1e-13; ++it) {
    bool moved = false;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      for (double sgn : {1.0, -1.0}) {
        VectorXd y = x;
        y(k) += sgn * h;
        if (std::abs(y(k)) > box) continue;
        const double fy = f(y);
        if (fy > fx) {
          x = y;
          fx = fy;
          moved = true;
        }
      }
    }
    if (!moved) h *= 0.5;
  }
  return x;
}

std::vector<VectorXd> Grid(int dim, double box) {
  const int per_axis = dim == 1 ? 4001 : dim == 2 ? 201 : 41;
  std::vector<VectorXd> pts;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  const double step = 2.0 * box / (per_axis - 1);
  while (true) {
    VectorXd p(dim);
    for (int i = 0; i < dim; ++i) p(i) = -box + step * idx[i];
    pts.push_back(p);
    int pos = dim - 1;
    while (pos >= 0 && ++idx[pos] == per_axis) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return pts;
}

struct SliceWitness {
  VectorXd u;
  bool swapped = false;
};

// Looks for u with q(u,1,b) <= 0 and q(u,1,a) < 0, in either order.
std::optional<SliceWitness> SearchSliceWitness(const SymMat& a, const SymMat& b,
                                               double tol, double box) {
  const int dim = a.n() - 1;
  if (dim < 1 || dim > 3) return std::nullopt;
  const double na = Unit(a), nb = Unit(b);
  const std::vector<VectorXd> grid = Grid(dim, box);
  const double h0 = 2.0 * box / (dim == 1 ? 4000 : dim == 2 ? 200 : 40);

  // Both strictly negative.
  auto both = [&](const VectorXd& u) {
    return std::min(-Qn(u, a, na), -Qn(u, b, nb));
  };
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t k = 0; k < grid.size(); ++k) ranked.emplace_back(both(grid[k]), k);
  const std::size_t top = std::min<std::size_t>(5, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + top, ranked.end(),
                    [](const auto& l, const auto& r) { return l.first > r.first; });
  for (std::size_t r = 0; r < top; ++r) {
    const VectorXd u = PatternMax(both, grid[ranked[r].second], h0, box);
    if (both(u) > 10.0 * tol) return SliceWitness{u, false};
  }

  // One order at a time: keep q(u,1,second) <= 0, drive q(u,1,first) down.
  auto ordered = [&](const SymMat& first, double nf, const SymMat& second,
                     double ns) -> std::optional<VectorXd> {
    auto f = [&](const VectorXd& u) {
      return Qn(u, second, ns) <= 0.0 ? -Qn(u, first, nf) : -kInf;
    };
    std::optional<VectorXd> best;
    double best_val = -kInf;
    for (const VectorXd& p : grid) {
      const double v = f(p);
      if (v > best_val) {
        best_val = v;
        best = p;
      }
    }
    if (!best) return std::nullopt;
    const VectorXd u = PatternMax(f, *best, h0, box);
    if (f(u) > 10.0 * tol) return u;
    return std::nullopt;
  };
  if (auto u = ordered(a, na, b, nb)) return SliceWitness{*u, false};
  if (auto u = ordered(b, nb, a, na)) return SliceWitness{*u, true};
  return std::nullopt;
}

}  // namespace

std::string VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kCertified:
      return "certified";
    case Verdict::kRefuted:
      return "refuted";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string OverallName(Overall o) {
  switch (o) {
    case Overall::kCertified:
      return "certified";
    case Overall::kNotCertified:
      return "not_certified";
    case Overall::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

SdpSolution SolvePairSdp(const SymMat& a, const SymMat& b, Sense sense,
                         double tol) {
  if (a.n() != b.n()) throw std::invalid_argument("pair SDP: dimension mismatch");
  SdpProblem p;
  p.n = a.n();
  p.objective = a;
  p.eq_constraints.emplace_back(SymMat::Identity(a.n()), 1.0);
  p.ineq_constraints.push_back({b, sense, 0.0});
  return Solve(p, tol);
}

bool Includes(const SymMat& a, const SymMat& b, double tol) {
  const SdpSolution s = SolvePairSdp(a, b, Sense::kGe, tol);
  const double v = PairValue(s);
  if (std::isnan(v)) return false;
  return v >= -tol * Unit(a);
}

PairVerdict CheckPairB(const SymMat& a, const SymMat& b, double tol) {
  if (a.n() != b.n()) throw std::invalid_argument("CheckPairB: dimension mismatch");
  PairVerdict out;
  const AbSearch ab = SearchAbCertificate(a, b, tol);
  out.margin = ab.margin;

  const SdpSolution s0ab = SolvePairSdp(a, b, Sense::kEq, tol);
  const SdpSolution s0ba = SolvePairSdp(b, a, Sense::kEq, tol);
  out.zeta0_ab = PairValue(s0ab);
  out.zeta0_ba = PairValue(s0ba);
  out.zeta_ab = PairValue(SolvePairSdp(a, b, Sense::kLe, tol));
  out.zeta_ba = PairValue(SolvePairSdp(b, a, Sense::kLe, tol));

  if (ab.found) {
    out.status = Verdict::kCertified;
    out.certificate = std::make_pair(ab.alpha, ab.beta);
    return out;
  }
  if (out.zeta0_ab < -10.0 * tol * Unit(a)) {
    out.status = Verdict::kRefuted;
    out.witness = Witness(s0ab.x, a, b, tol);
  } else if (out.zeta0_ba < -10.0 * tol * Unit(b)) {
    out.status = Verdict::kRefuted;
    out.witness = Witness(s0ba.x, b, a, tol);
    out.witness_swapped = true;
  }
  return out;
}

ConditionBReport CheckConditionB(const ConstraintSet& s, double tol) {
  ConditionBReport out;
  const int m = static_cast<int>(s.size());
  bool any_refuted = false, any_open = false;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      PairVerdict v;
      if (s.members[i] == s.members[j]) {
        v.status = Verdict::kCertified;
      } else {
        v = CheckPairB(s.members[i], s.members[j], tol);
      }
      v.i = i;
      v.j = j;
      any_refuted |= v.status == Verdict::kRefuted;
      any_open |= v.status == Verdict::kInconclusive;
      out.pairs.push_back(std::move(v));
    }
  }
  out.overall = any_refuted ? Overall::kNotCertified
                : any_open  ? Overall::kInconclusive
                            : Overall::kCertified;
  return out;
}

MemberVerdict CheckCprimeMember(const SymMat& b, double tol) {
  const int n = b.n();
  if (n < 2) throw std::invalid_argument("(C)': n must be at least 2");
  MemberVerdict out;
  const double scale = Unit(b);
  const MatrixXd full = b.ToDense();
  const MatrixXd c = full.topLeftCorner(n - 1, n - 1);
  const VectorXd lin = full.col(n - 1).head(n - 1);
  const double gamma = full(n - 1, n - 1);
  auto q = [&](const VectorXd& u) { return EvalQuadratic(u, 1.0, b); };
  const double target = -tol * scale;

  // Walks along u0 + t d until q drops below the target.
  auto ray = [&](const VectorXd& u0, const VectorXd& d) {
    VectorXd u = u0;
    for (double t = 1.0; t < 1e12; t *= 2.0) {
      u = u0 + t * d;
      if (q(u) < target) break;
    }
    return u;
  };

  const EigDecomp e = EigSym(c);
  const double lmax = std::max(std::abs(e.values(0)), std::abs(e.values(n - 2)));
  const double cut = 1e-12 * std::max(1.0, lmax);
  if (e.values(n - 2) < -cut) {
    VectorXd d = e.vectors.col(n - 2);
    if (lin.dot(d) > 0.0) d = -d;
    out.witness_u = ray(VectorXd::Zero(n - 1), d);
    out.infimum = -kInf;
  } else {
    VectorXd u0 = VectorXd::Zero(n - 1);
    for (int k = 0; k < n - 1; ++k) {
      if (e.values(k) > cut) {
        u0 -= (e.vectors.col(k).dot(lin) / e.values(k)) * e.vectors.col(k);
      }
    }
    const VectorXd r = c * u0 + lin;
    if (r.norm() > 1e-9 * scale) {
      out.witness_u = ray(u0, -r / r.norm());
      out.infimum = -kInf;
    } else {
      out.witness_u = u0;
      out.infimum = gamma + lin.dot(u0);
    }
  }
  out.witness_value = q(*out.witness_u);
  out.holds = out.witness_value < target;
  if (!out.holds) out.witness_u.reset();

  SdpProblem p;
  p.n = n;
  p.objective = b;
  SymMat enn(n);
  enn.Set(n - 1, n - 1, 1.0);
  p.eq_constraints.emplace_back(enn, 1.0);
  const SdpSolution sol = Solve(p, tol, 100);
  out.sdp_status = sol.status;
  out.sdp_value = sol.value;
  return out;
}

BprimeCprimeReport CheckBprimeCprime(const ConstraintSet& s, double tol,
                                     const WitnessSearchOptions& opts) {
  if (s.n < 2) throw std::invalid_argument("(B)'/(C)': n must be at least 2");
  BprimeCprimeReport out;
  out.c_prime_holds = true;
  for (int k = 0; k < static_cast<int>(s.size()); ++k) {
    MemberVerdict v = CheckCprimeMember(s.members[k], tol);
    v.index = k;
    out.c_prime_holds &= v.holds;
    out.c_prime.push_back(std::move(v));
  }

  bool any_refuted = false, any_open = false;
  const int m = static_cast<int>(s.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const SymMat& a = s.members[i];
      const SymMat& b = s.members[j];
      SliceVerdict v;
      v.i = i;
      v.j = j;
      const AbSearch ab = SearchAbCertificate(a, b, tol);
      if (ab.found || a == b) {
        v.status = Verdict::kCertified;
        v.route = "certificate";
        if (ab.found) v.certificate = std::make_pair(ab.alpha, ab.beta);
      } else if (auto w = SearchSliceWitness(a, b, tol, opts.box)) {
        v.status = Verdict::kRefuted;
        v.route = "witness";
        v.witness_u = w->u;
        v.witness_swapped = w->swapped;
        v.q_i = EvalQuadratic(w->u, 1.0, a);
        v.q_j = EvalQuadratic(w->u, 1.0, b);
      } else {
        const double zab = PairValue(SolvePairSdp(a, b, Sense::kLe, tol));
        const double zba = PairValue(SolvePairSdp(b, a, Sense::kLe, tol));
        if (zab >= -tol * Unit(a) && zba >= -tol * Unit(b)) {
          v.status = Verdict::kCertified;
          v.route = "inclusion";
        } else {
          v.route = "none";
        }
      }
      any_refuted |= v.status == Verdict::kRefuted;
      any_open |= v.status == Verdict::kInconclusive;
      out.b_prime.push_back(std::move(v));
    }
  }
  out.b_prime_holds = !any_refuted && !any_open;
  if (out.b_prime_holds && out.c_prime_holds) {
    out.overall = Overall::kCertified;
  } else if (any_refuted || !out.c_prime_holds) {
    out.overall = Overall::kNotCertified;
  } else {
    out.overall = Overall::kInconclusive;
  }
  return out;
}

SlaterResult SolveSlater(const ConstraintSet& s, double tol) {
  const int n = s.n;
  const int m = static_cast<int>(s.size());
  // X = Y + t I with Y PSD and t >= 0; slack per member.
  ConicForm f;
  f.n = n;
  f.c = SymMat(n);
  f.c_lin = Eigen::VectorXd::Zero(m + 1);
  f.c_lin(0) = -1.0;
  f.a_lin = Eigen::MatrixXd::Zero(m + 1, m + 1);
  f.b = Eigen::VectorXd::Zero(m + 1);
  for (int k = 0; k < m; ++k) {
    f.a.push_back(s.members[k]);
    f.a_lin(k, 0) = s.members[k].Trace();
    f.a_lin(k, k + 1) = -1.0;
  }
  f.a.push_back(SymMat::Identity(n));
  f.a_lin(m, 0) = n;
  f.b(m) = 1.0;
  const ConicSolution sol = SolveConic(f, SolverOptions{tol, 200});
  SlaterResult out;
  out.status = sol.status;
  if (sol.status == SdpStatus::kInfeasible) {
    out.x = SymMat(n);
    out.t = 0.0;
    return out;
  }
  out.t = sol.x_lin(0);
  out.x = sol.x + out.t * SymMat::Identity(n);
  return out;
}

StructuralReport CheckStructural(const ConstraintSet& s, double tol) {
  StructuralReport out;
  out.a1 = std::all_of(s.members.begin(), s.members.end(),
                       [](const SymMat& b) { return b.AllFinite(); });
  const SlaterResult sl = SolveSlater(s, tol);
  out.slater_margin = sl.t;
  out.a3 = sl.status != SdpStatus::kInfeasible && sl.t > tol;

  bool all_zero = !s.empty();
  for (int k = 0; k < static_cast<int>(s.size()); ++k) {
    const SymMat& b = s.members[k];
    all_zero &= b.IsZero();
    if (IsPsd(b, tol)) out.psd_members.push_back(k);
  }
  out.a4 = out.psd_members.empty() || all_zero;

  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    for (int j = 0; j < static_cast<int>(s.size()); ++j) {
      if (i == j) continue;
      if (Includes(s.members[i], s.members[j], tol)) out.inclusions.emplace_back(i, j);
    }
  }
  out.a5 = out.inclusions.empty();
  return out;
}

Classification Classify(const ConstraintSet& s, double tol) {
  Classification out;
  for (int k = 0; k < static_cast<int>(s.size()); ++k) {
    SdpProblem p;
    p.n = s.n;
    p.objective = -s.members[k];
    p.eq_constraints.emplace_back(SymMat::Identity(s.n), 1.0);
    for (const SymMat& b : s.members) p.ineq_constraints.push_back({b, Sense::kGe, 0.0});
    const SdpSolution sol = Solve(p, tol);
    // An empty slice means J_+ = {O}, on which every member vanishes.
    const double maxv = sol.status == SdpStatus::kInfeasible ? 0.0 : -sol.value;
    out.max_values.push_back(maxv);
    if (maxv <= tol * Unit(s.members[k])) out.b0.push_back(k);
  }
  out.case_a = !out.b0.empty();
  if (out.case_a) out.exposing_index = out.b0.front();
  return out;
}

CertReport Certify(const ConstraintSet& s, double tol, bool inequality_form) {
  CertReport out;
  out.structural = CheckStructural(s, tol);
  out.b = CheckConditionB(s, tol);
  if (inequality_form && s.n >= 2 && !s.empty()) {
    out.bc_prime = CheckBprimeCprime(s, tol);
  }
  if (out.b.overall == Overall::kCertified) out.classification = Classify(s, tol);

  const bool bc_ok = out.bc_prime && out.bc_prime->overall == Overall::kCertified;
  const bool bc_no =
      !out.bc_prime || out.bc_prime->overall == Overall::kNotCertified;
  if (out.b.overall == Overall::kCertified || bc_ok) {
    out.overall = Overall::kCertified;
  } else if (out.b.overall == Overall::kNotCertified && bc_no) {
    out.overall = Overall::kNotCertified;
  } else {
    out.overall = Overall::kInconclusive;
  }
  return out;
}

}  // namespace exactsdp
