#include "exactsdp/model.h"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace exactsdp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void Require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void ValidateHyperbola(const HyperbolaSeq& h) {
  Require(h.breakpoints.size() >= 2,
          "hyperbola_seq: need at least two breakpoints");
  Require(h.breakpoints.front() >= 0.0,
          "hyperbola_seq: breakpoints must be nonnegative");
  for (std::size_t k = 1; k < h.breakpoints.size(); ++k) {
    Require(h.breakpoints[k - 1] < h.breakpoints[k],
            "hyperbola_seq: breakpoints must be strictly increasing");
  }
  Require(h.r_squared > 0.0, "hyperbola_seq: r^2 must be positive");
}

void ValidateGeneralizedHyperbola(const GeneralizedHyperbola& g, int n) {
  Require(g.lambda.size() == n,
          "generalized_hyperbola: lambda must have n entries");
  Require(n >= 3, "generalized_hyperbola: n must be at least 3");
  Require(g.split >= 1 && g.split <= n - 2,
          "generalized_hyperbola: split must satisfy 1 <= l <= n-2");
  Require((g.lambda.array() > 0.0).all(),
          "generalized_hyperbola: lambda must be positive");
}

SymMat ParabolaMemberMatrix(const ParabolaMember& p, int n) {
  Require(static_cast<int>(p.lambdas.size()) == n - 1,
          "parabola_set: each member needs n-1 lambdas");
  Require(p.sign == 1 || p.sign == -1, "parabola_set: sign must be +1 or -1");
  SymMat b = ParabolaMatrix(p.lambdas);
  if (p.transform.size() != 0) {
    Require(p.transform.rows() == n && p.transform.cols() == n,
            "parabola_set: transform must be n x n");
    b = Congruence(b, p.transform);
  }
  return p.sign > 0 ? b : -b;
}

// Frobenius-norm Lipschitz bound of sigma -> B(lambda, sigma) on |sigma| <= s.
double GeneralizedHyperbolaLipschitz(const GeneralizedHyperbola& g, int n,
                                     double s) {
  double big_lambda = 0.0;
  double sq = 0.0;
  for (int j = g.split; j <= n - 2; ++j) {
    big_lambda += g.lambda(j);
    sq += g.lambda(j) * g.lambda(j);
  }
  const double diag = 2.0 * s * big_lambda;
  return std::sqrt(g.split * diag * diag + 2.0 * g.split * sq);
}

void CheckSchedule(const DiscretizationConfig& cfg, int k) {
  const auto& eps = cfg.epsilon_schedule;
  Require(!eps.empty(), "discretize: empty epsilon schedule");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    Require(eps[i] > 0.0, "discretize: epsilon must be positive");
    if (i > 0) {
      Require(eps[i] < eps[i - 1],
              "discretize: epsilon schedule must be strictly decreasing");
    }
  }
  Require(k >= 0 && k < static_cast<int>(eps.size()),
          "discretize: index outside the epsilon schedule");
}

}  // namespace

std::string FamilyKindName(const ConstraintFamily& f) {
  return std::visit(
      Overloaded{
          [](const ExplicitFamily&) { return std::string("explicit"); },
          [](const BallGrid&) { return std::string("ball_grid"); },
          [](const HyperbolaSeq&) { return std::string("hyperbola_seq"); },
          [](const ParabolaSet&) { return std::string("parabola_set"); },
          [](const GeneralizedHyperbola&) {
            return std::string("generalized_hyperbola");
          },
      },
      f);
}

void GeoCop::Validate() const {
  Require(n >= 1, "GeoCop: n must be positive");
  Require(q.n() == n, "GeoCop: Q has wrong dimension");
  Require(h.n() == n, "GeoCop: H has wrong dimension");
  Require(bset.n == n, "GeoCop: constraint set has wrong dimension");
  for (const SymMat& b : bset.members) {
    Require(b.n() == n, "GeoCop: constraint member has wrong dimension");
  }
  if (congruence) {
    Require(congruence->rows() == n && congruence->cols() >= 1,
            "GeoCop: congruence must have n rows");
  }
}

SymMat BallMatrix(const Eigen::VectorXd& center, double radius) {
  Require(radius > 0.0, "ball_grid: radius must be positive");
  const int d = static_cast<int>(center.size());
  SymMat b(d + 1);
  for (int i = 0; i < d; ++i) {
    b.Set(i, i, 1.0);
    b.Set(i, d, -center(i));
  }
  b.Set(d, d, center.squaredNorm() - radius * radius);
  return b;
}

SymMat HyperbolaMatrix(double a_prev, double a_k, double r_squared) {
  SymMat b(3);
  b.Set(0, 0, a_prev * a_k);
  b.Set(0, 1, -(a_prev + a_k) / 2.0);
  b.Set(1, 1, 1.0);
  b.Set(2, 2, r_squared);
  return b;
}

SymMat HyperbolaLimit(double a_limit, double r_squared) {
  return HyperbolaMatrix(a_limit, a_limit, r_squared);
}

SymMat ParabolaMatrix(const std::vector<double>& lambdas) {
  const int n = static_cast<int>(lambdas.size()) + 1;
  Require(n >= 2, "parabola: need at least one lambda");
  SymMat b(n);
  for (int i = 1; i < n; ++i) {
    Require(lambdas[i - 1] > 0.0, "parabola: lambdas must be positive");
    b.Set(i, i, lambdas[i - 1]);
  }
  b.Set(0, n - 1, -0.5);
  return b;
}

SymMat GeneralizedHyperbolaMatrix(const Eigen::VectorXd& lambda, double sigma,
                                  int split) {
  const int n = static_cast<int>(lambda.size());
  GeneralizedHyperbola g{lambda, split, {}};
  ValidateGeneralizedHyperbola(g, n);
  SymMat b(n);
  for (int i = 0; i < split; ++i) b.Add(i, i, -lambda(i));
  for (int j = split; j <= n - 2; ++j) {
    for (int i = 0; i < split; ++i) {
      b.Add(j, j, lambda(j));
      b.Add(i, i, lambda(j) * sigma * sigma);
      b.Add(i, j, -lambda(j) * sigma);
    }
  }
  b.Set(n - 1, n - 1, lambda(n - 1));
  return b;
}

double EvalQuadratic(const Eigen::VectorXd& u, double z, const SymMat& b) {
  if (u.size() != b.n() - 1) {
    throw std::invalid_argument("EvalQuadratic: len(u) must be n-1");
  }
  Eigen::VectorXd x(b.n());
  x << u, z;
  return QuadraticForm(b, x);
}

ConstraintSet BuildFamily(const ConstraintFamily& f, int n) {
  Require(n >= 1, "BuildFamily: n must be positive");
  ConstraintSet out;
  out.n = n;
  out.family = f;
  out.members = std::visit(
      Overloaded{
          [&](const ExplicitFamily& e) {
            for (const SymMat& b : e.members) {
              Require(b.n() == n, "explicit: member has wrong dimension");
              Require(b.AllFinite(), "explicit: non-finite member");
            }
            return e.members;
          },
          [&](const BallGrid& g) {
            Require(g.radius > 0.0, "ball_grid: radius must be positive");
            Require(!g.centers.empty(),
                    "ball_grid: lattice index set needs Discretize()");
            std::vector<SymMat> m;
            for (const auto& t : g.centers) {
              Require(t.size() == n - 1, "ball_grid: centre must lie in R^{n-1}");
              m.push_back(BallMatrix(t, g.radius));
            }
            return m;
          },
          [&](const HyperbolaSeq& h) {
            Require(n == 3, "hyperbola_seq: family lives in S^3");
            ValidateHyperbola(h);
            std::vector<SymMat> m;
            for (std::size_t k = 1; k < h.breakpoints.size(); ++k) {
              m.push_back(HyperbolaMatrix(h.breakpoints[k - 1],
                                          h.breakpoints[k], h.r_squared));
            }
            return m;
          },
          [&](const ParabolaSet& p) {
            Require(n >= 2, "parabola_set: n must be at least 2");
            std::vector<SymMat> m;
            for (const auto& member : p.members) {
              m.push_back(ParabolaMemberMatrix(member, n));
            }
            return m;
          },
          [&](const GeneralizedHyperbola& g) {
            ValidateGeneralizedHyperbola(g, n);
            Require(!g.sigmas.empty(),
                    "generalized_hyperbola: continuous sigma needs Discretize()");
            std::vector<SymMat> m;
            for (double s : g.sigmas) {
              m.push_back(GeneralizedHyperbolaMatrix(g.lambda, s, g.split));
            }
            return m;
          },
      },
      f);
  return out;
}

ConstraintSet Normalize(const ConstraintSet& s) {
  ConstraintSet out;
  out.n = s.n;
  out.family = s.family;
  out.truncation = s.truncation;
  bool saw_zero = false;
  std::map<std::vector<double>, bool> seen;
  for (const SymMat& b : s.members) {
    const double norm = b.FrobeniusNorm();
    if (norm == 0.0) {
      saw_zero = true;
      continue;
    }
    SymMat unit = b / norm;
    std::vector<double> key = unit.packed();
    for (double& v : key) v = std::round(v * 1e12) / 1e12;
    if (seen.emplace(std::move(key), true).second) {
      out.members.push_back(std::move(unit));
    }
  }
  if (out.members.empty() && saw_zero) out.members.push_back(SymMat(s.n));
  return out;
}

std::vector<Eigen::VectorXd> LatticePoints(int dim, int step, const Box& box) {
  Require(dim >= 1, "LatticePoints: dimension must be positive");
  Require(step >= 1, "LatticePoints: step must be positive");
  std::vector<long> coords;
  const long lo = static_cast<long>(std::ceil(box.lo / step));
  const long hi = static_cast<long>(std::floor(box.hi / step));
  for (long c = lo; c <= hi; ++c) coords.push_back(c * step);
  std::vector<Eigen::VectorXd> pts;
  if (coords.empty()) return pts;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) p(i) = static_cast<double>(coords[idx[i]]);
    pts.push_back(p);
    int pos = dim - 1;
    while (pos >= 0 && ++idx[pos] == coords.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return pts;
}

ConstraintSet Discretize(const ConstraintFamily& f,
                         const DiscretizationConfig& cfg, int k, int n) {
  CheckSchedule(cfg, k);
  const double eps = cfg.epsilon_schedule[k];
  ConstraintSet out;
  if (const auto* g = std::get_if<BallGrid>(&f); g && g->centers.empty()) {
    Require(n >= 2, "ball_grid: n must be at least 2");
    BallGrid realized = *g;
    realized.centers = LatticePoints(n - 1, g->lattice_step, cfg.box);
    Require(!realized.centers.empty(), "ball_grid: truncation box is empty");
    out = BuildFamily(realized, n);
    out.family = f;
  } else if (const auto* gh = std::get_if<GeneralizedHyperbola>(&f);
             gh && gh->sigmas.empty()) {
    ValidateGeneralizedHyperbola(*gh, n);
    Require(cfg.box.lo <= cfg.box.hi, "generalized_hyperbola: empty box");
    const double width = cfg.box.hi - cfg.box.lo;
    const double lip = GeneralizedHyperbolaLipschitz(
        *gh, n, std::max(std::abs(cfg.box.lo), std::abs(cfg.box.hi)));
    // Dyadic grids are nested, so refining epsilon only adds members.
    int depth = 0;
    while (depth < 30 && lip * width / std::ldexp(1.0, depth) / 2.0 > eps) {
      ++depth;
    }
    const long cells = 1L << depth;
    GeneralizedHyperbola realized = *gh;
    for (long i = 0; i <= cells; ++i) {
      realized.sigmas.push_back(width == 0.0 ? cfg.box.lo
                                             : cfg.box.lo + width * i / cells);
      if (width == 0.0) break;
    }
    out = BuildFamily(realized, n);
    out.family = f;
  } else {
    // Finite index sets are returned whole.
    out = BuildFamily(f, n);
  }
  out.truncation = "box [" + std::to_string(cfg.box.lo) + ", " +
                   std::to_string(cfg.box.hi) + "], eps " + std::to_string(eps);
  return out;
}

}  // namespace exactsdp
