#include "exactsdp/gallery.h"

#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "exactsdp/certify.h"
#include "exactsdp/exact.h"
#include "exactsdp/plot.h"
#include "exactsdp/reduce.h"

namespace exactsdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Observations = std::map<std::string, Observed>;

const double kSqrt3Half = std::sqrt(3.0) / 2.0;

SymMat ExA() { return SymMat::FromRows({{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}); }
SymMat ExB() { return SymMat::FromRows({{-1, -2, 0, -1}, {-2, -1, 0, 0}, {0, 0, 1, -1}, {-1, 0, -1, -1}}); }
SymMat ExC() { return SymMat::FromRows({{1, 2, 0, 1}, {2, 1, 0, 0}, {0, 0, -3, 2}, {1, 0, 2, -1}}); }

VectorXd Vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ConstraintSet SetOf(int n, std::vector<SymMat> members) {
  ConstraintSet s;
  s.n = n;
  s.members = std::move(members);
  return s;
}

ConstraintSet Subset(const ConstraintSet& s, const std::vector<int>& idx) {
  ConstraintSet out;
  out.n = s.n;
  for (int k : idx) out.members.push_back(s.members[k]);
  return out;
}

GeoCop InequalityForm(ConstraintSet s, const VectorXd& target) {
  GeoCop p;
  p.n = s.n;
  p.q = DistanceObjective(target);
  p.h = LastUnit(s.n);
  p.bset = std::move(s);
  return p;
}

Expectation Quoted(std::string key, Observed v, double tol = 0.0) {
  return {std::move(key), std::move(v), tol, Origin::kQuoted};
}
Expectation Derived(std::string key, Observed v, double tol = 0.0) {
  return {std::move(key), std::move(v), tol, Origin::kDerived};
}

MatrixXd Rotation(double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  MatrixXd l = MatrixXd::Identity(3, 3);
  l(0, 0) = std::cos(t);
  l(0, 1) = -std::sin(t);
  l(1, 0) = std::sin(t);
  l(1, 1) = std::cos(t);
  return l;
}

ConstraintSet BallLattice(double half_width) {
  DiscretizationConfig cfg;
  cfg.epsilon_schedule = {1.0};
  cfg.box = {-half_width, half_width};
  return Discretize(BallGrid{0.5, 1, {}}, cfg, 0, 3);
}

SymMat GeneralizedMember(double sigma) {
  return GeneralizedHyperbolaMatrix(Vec({1, 1, 1}), sigma, 1);
}

MatrixXd HyperbolaExtension() {
  // Rows (b^T, 0), (c^T, 0), (0, 1) with b = e1, c = e2 in R^3.
  MatrixXd l = MatrixXd::Zero(3, 4);
  l(0, 0) = 1.0;
  l(1, 1) = 1.0;
  l(2, 3) = 1.0;
  return l;
}

ConstraintSet HyperbolaSet() {
  return BuildFamily(HyperbolaSeq{{0.0, 1.0, 2.0, 4.0}, 0.5, std::nullopt}, 3);
}

// First tau in 1, 2, 4, ..., 1024 for which {B(lambda, 0), B(lambda, tau)}
// passes (B)' and (C)'; 0 if none does.
double DoublingSearch(double tol) {
  for (double tau = 1.0; tau <= 1024.0; tau *= 2.0) {
    const ConstraintSet s = SetOf(3, {GeneralizedMember(0.0), GeneralizedMember(tau)});
    if (CheckBprimeCprime(s, tol).overall == Overall::kCertified) return tau;
  }
  return 0.0;
}

double MaxAbsDiff(const SymMat& a, const SymMat& b) {
  if (a.n() != b.n()) return std::numeric_limits<double>::infinity();
  return (a.ToDense() - b.ToDense()).cwiseAbs().maxCoeff();
}

int CountCertifiedPairs(const ConditionBReport& r) {
  int c = 0;
  for (const PairVerdict& p : r.pairs) c += p.status == Verdict::kCertified;
  return c;
}

// Agreement of the raster with an independent evaluation at every centre.
double RasterAgreement(const ConstraintSet& s, const Raster& r) {
  long agree = 0;
  for (int iy = 0; iy < r.height; ++iy) {
    for (int ix = 0; ix < r.width; ++ix) {
      const Eigen::Vector2d c = r.Centre(ix, iy);
      bool in = true;
      for (const SymMat& b : s.members) {
        const Eigen::Vector3d v(c(0), c(1), 1.0);
        if (v.dot(b.ToDense() * v) < 0.0) in = false;
      }
      agree += (in == (r.feasible[static_cast<std::size_t>(iy) * r.width + ix] != 0));
    }
  }
  return static_cast<double>(agree) / (static_cast<double>(r.width) * r.height);
}

void ObservePipeline(const GeoCop& p, Observations& obs) {
  const PipelineVerdict v = RunPipeline(p);
  obs["exactness"] = ExactnessName(v.exactness);
  obs["sdp_value"] = v.sdp.value;
  obs["rank_one_confident"] = v.rank_one.confident ? 1.0 : 0.0;
  obs["rank_one_residual"] = v.rank_one.feas_residual;
}

// Per-case evaluation --------------------------------------------------------

Observations ObserveEx61(const GalleryCase& c) {
  Observations obs;
  const ConstraintSet& s = c.problem.bset;
  const SymMat xt = SymMat::Diagonal({0, 0, 1, 1});
  obs["inner_b_xtilde"] = Inner(s.members[1], xt);
  obs["inner_a_xtilde"] = Inner(s.members[0], xt);

  const ConditionBReport b = CheckConditionB(s);
  obs["condition_b"] = OverallName(b.overall);
  const PairVerdict& ab = b.pairs.at(0);
  obs["pair_ab"] = VerdictName(ab.status);
  obs["pair_ab_certificate"] = std::string(ab.certificate ? "found" : "none");
  obs["pair_ab_any_sign"] =
      std::string(SearchAnySignCombination(s.members[0], s.members[1], 1e-8).found ? "found" : "none");
  if (ab.witness && !ab.witness_swapped) {
    const SymMat w = *ab.witness * (2.0 / ab.witness->Trace());
    obs["witness_distance"] = MaxAbsDiff(w, xt);
  }

  GeoCop raw = c.problem;
  const ReductionResult red = FacialReduce(raw);
  obs["reduced_n"] = static_cast<double>(red.reduced_n);
  if (red.reduced_n == 2) {
    const SymMat ea = SymMat::FromRows({{2, 1}, {1, 1}});
    const SymMat eb = SymMat::FromRows({{-1, -2}, {-2, -1}});
    const SymMat ec = SymMat::FromRows({{1, 2}, {2, 1}});
    const auto& m = red.reduced.bset.members;
    obs["reduced_entry_error"] = std::max(
        {MaxAbsDiff(m[0], ea), MaxAbsDiff(m[1], eb), MaxAbsDiff(m[2], ec)});
    const PruneResult pr = RemoveRedundant(red.reduced.bset);
    std::string kept;
    for (int k : pr.kept_indices) kept += (kept.empty() ? "" : ",") + std::to_string(k);
    obs["pruned_kept"] = kept;
    const ConditionBReport rb = CheckConditionB(pr.kept);
    obs["reduced_condition_b"] = OverallName(rb.overall);
    if (!rb.pairs.empty() && rb.pairs[0].certificate) {
      obs["certificate_alpha"] = rb.pairs[0].certificate->first;
      obs["certificate_beta"] = rb.pairs[0].certificate->second;
      obs["certificate_margin"] = rb.pairs[0].margin;
    }
    const Classification cl = Classify(pr.kept);
    obs["case"] = std::string(cl.case_a ? "a" : "b");
    obs["exposing_member"] = static_cast<double>(cl.exposing_index);
  }
  ObservePipeline(c.problem, obs);
  return obs;
}

Observations ObserveEx61Reduced(const GalleryCase& c, long samples) {
  Observations obs;
  const PipelineVerdict v = RunPipeline(c.problem);
  obs["exactness"] = ExactnessName(v.exactness);
  obs["sdp_value"] = v.sdp.value;
  obs["eigenratio_ok"] = v.rank_one.eigenratio >= kConfidentRatio ? 1.0 : 0.0;
  if (v.lifted_x.size() == 2) obs["x1x2"] = v.lifted_x(0) * v.lifted_x(1);
  const OracleResult o = SolveSphere(c.problem, samples, 0);
  if (o.feasible) obs["oracle_value"] = o.value;
  return obs;
}

Observations ObserveSlices(const GalleryCase& c) {
  Observations obs;
  const ConstraintSet& s = c.problem.bset;
  for (std::size_t k = 0; k < s.size(); ++k) {
    obs["c_prime_B" + std::to_string(k + 1)] =
        std::string(CheckCprimeMember(s.members[k]).holds ? "holds" : "fails");
  }
  for (const auto& idx : c.subsets) {
    std::string name = "combo_";
    for (int k : idx) name += "B" + std::to_string(k + 1);
    obs[name] = OverallName(CheckBprimeCprime(Subset(s, idx)).overall);
  }
  return obs;
}

Observations ObserveOverlap(const GalleryCase& c) {
  Observations obs;
  const ConstraintSet& s = c.problem.bset;
  const BprimeCprimeReport r = CheckBprimeCprime(s);
  obs["bprime_cprime"] = OverallName(r.overall);
  const VectorXd quarter = Vec({0.25, 0.0});
  obs["q_quarter_b1"] = EvalQuadratic(quarter, 1.0, s.members[0]);
  obs["q_quarter_b2"] = EvalQuadratic(quarter, 1.0, s.members[1]);
  for (const SliceVerdict& sv : r.b_prime) {
    if (sv.status != Verdict::kRefuted || !sv.witness_u) continue;
    // Witness: q <= 0 for one member and q < 0 for the other.
    const double qi = EvalQuadratic(*sv.witness_u, 1.0, s.members[sv.i]);
    const double qj = EvalQuadratic(*sv.witness_u, 1.0, s.members[sv.j]);
    const double strict = sv.witness_swapped ? qj : qi;
    const double weak = sv.witness_swapped ? qi : qj;
    obs["witness_valid"] = (weak <= 1e-8 && strict < -1e-8) ? 1.0 : 0.0;
  }
  return obs;
}

Observations ObserveFig2(const GalleryCase& c) {
  Observations obs;
  const ConstraintSet& s = c.problem.bset;
  obs["bprime_cprime"] = OverallName(CheckBprimeCprime(s).overall);
  const Raster r = RasterizeRegion(s, *c.plot_box, 800);
  obs["gray_fraction"] = r.FeasibleFraction();
  obs["raster_agreement"] = RasterAgreement(s, r);
  const OracleResult o = SolveRegion2d(s, c.problem.q, *c.plot_box, 400);
  obs["region_min_distance2"] = o.value;
  GeoCop sphere = c.problem;
  sphere.q = Gram(Vec({1, 0, 0})) - Gram(Vec({0, 1, 0}));
  sphere.q.Set(1, 2, 0.1);  // breaks the sign symmetry in the last coordinate
  sphere.h = SymMat::Identity(3);
  ObservePipeline(sphere, obs);
  return obs;
}

Observations ObserveEx62(const GalleryCase& c) {
  Observations obs;
  const ConstraintSet& s = c.problem.bset;
  obs["members"] = static_cast<double>(s.size());
  const ConditionBReport b = CheckConditionB(s);
  obs["pairs"] = static_cast<double>(b.pairs.size());
  obs["pairs_certified"] = static_cast<double>(CountCertifiedPairs(b));
  ObservePipeline(c.problem, obs);
  bool monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (double w : {1.0, 2.0, 3.0}) {
    GeoCop p = c.problem;
    p.bset = BallLattice(w);
    SdpProblem sdp;
    sdp.n = 3;
    sdp.objective = p.q;
    sdp.eq_constraints.emplace_back(p.h, 1.0);
    for (const SymMat& m : p.bset.members) sdp.ineq_constraints.push_back({m, Sense::kGe, 0.0});
    const SdpSolution sol = Solve(sdp);
    obs["eta_box" + std::to_string(static_cast<int>(w))] = sol.value;
    if (!Usable(sol) || sol.value < prev - 1e-8) monotone = false;
    prev = sol.value;
  }
  obs["monotone"] = monotone ? 1.0 : 0.0;
  return obs;
}

Observations ObserveEx63(const GalleryCase& c) {
  Observations obs;
  const BprimeCprimeReport r = CheckBprimeCprime(c.problem.bset);
  obs["bprime"] = std::string(r.b_prime_holds ? "holds" : "fails");
  obs["cprime"] = std::string(r.c_prime_holds ? "holds" : "fails");
  const SymMat limit = HyperbolaLimit(4.0, 0.5);
  obs["limit_psd"] = LambdaMin(limit) >= -1e-10 ? 1.0 : 0.0;
  obs["limit_cprime"] = std::string(CheckCprimeMember(limit).holds ? "holds" : "fails");
  ObservePipeline(c.problem, obs);
  return obs;
}

Observations ObserveEx63Ext(const GalleryCase& c) {
  Observations obs;
  obs["condition_b"] = OverallName(CheckConditionB(c.problem.bset).overall);
  return obs;
}

Observations ObserveEx64(const GalleryCase& c) {
  Observations obs;
  const double tau = DoublingSearch(1e-8);
  obs["tau_found"] = tau > 0.0 ? 1.0 : 0.0;
  obs["tau_star"] = tau;
  if (tau > 0.0) {
    const ConstraintSet s = SetOf(3, {GeneralizedMember(0.0), GeneralizedMember(tau)});
    obs["bprime_cprime"] = OverallName(CheckBprimeCprime(s).overall);
  }
  obs["sigma_member_matches"] = MaxAbsDiff(c.problem.bset.members[0], SymMat::Diagonal({-1, 1, 1}));
  return obs;
}

Observations ObserveParabola(const GalleryCase& c) {
  Observations obs;
  const ConstraintSet& s = c.problem.bset;
  obs["bprime_cprime"] = OverallName(CheckBprimeCprime(s).overall);
  const Raster r = RasterizeRegion(s, *c.plot_box, 400);
  obs["raster_agreement"] = RasterAgreement(s, r);
  ObservePipeline(c.problem, obs);
  return obs;
}

std::string Show(const Observed& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  std::ostringstream os;
  os.precision(12);
  os << std::get<double>(v);
  return os.str();
}

}  // namespace

SymMat DistanceObjective(const VectorXd& c) {
  const int n = static_cast<int>(c.size()) + 1;
  SymMat q(n);
  for (int i = 0; i + 1 < n; ++i) {
    q.Set(i, i, 1.0);
    q.Set(i, n - 1, -c(i));
  }
  q.Set(n - 1, n - 1, c.squaredNorm());
  return q;
}

SymMat LastUnit(int n) {
  SymMat e(n);
  e.Set(n - 1, n - 1, 1.0);
  return e;
}

std::vector<SymMat> FigureOneForms(double r) {
  return {
      SymMat::Diagonal({1, 1, -r}),
      SymMat::Diagonal({-1, 1, 1}),
      SymMat::FromRows({{1, 0, 0}, {0, 0, -0.5}, {0, -0.5, 1}}),
      SymMat::Diagonal({1, -1, 0}),
      SymMat::FromRows({{0, 0, 0.5}, {0, 0, 0}, {0.5, 0, 1}}),
      SymMat::Diagonal({-1, -1, 1}),
  };
}

std::vector<std::string> GalleryIds() {
  return {"ex6.1",        "ex6.1-reduced", "fig1",       "fig1-r1",
          "fig1-combos",  "fig1-overlap",  "fig2",       "ex6.2",
          "ex6.3",        "ex6.3-ext",     "ex6.4",      "ex6.5-fig6b",
          "ex6.5-fig6c"};
}

GalleryCase BuildCase(const std::string& id) {
  GalleryCase c;
  c.id = id;
  if (id == "ex6.1") {
    c.title = "alpha-beta counterexample and its facial reduction";
    c.problem.n = 4;
    c.problem.q = SymMat::Diagonal({1, -1, 0, 0});
    c.problem.h = SymMat::Identity(4);
    c.problem.bset = SetOf(4, {ExA(), ExB(), ExC()});
    c.expected = {
        Quoted("inner_b_xtilde", 0.0), Quoted("inner_a_xtilde", -2.0),
        Quoted("condition_b", "not_certified"), Quoted("pair_ab", "refuted"),
        Quoted("pair_ab_certificate", "none"), Quoted("pair_ab_any_sign", "none"),
        Derived("witness_distance", 0.0, 1e-6), Quoted("reduced_n", 2.0),
        Quoted("reduced_entry_error", 0.0, 1e-12), Quoted("pruned_kept", "1,2"),
        Quoted("reduced_condition_b", "certified"), Quoted("certificate_alpha", 1.0, 1e-9),
        Quoted("certificate_beta", 1.0, 1e-9), Quoted("certificate_margin", 0.0, 1e-9),
        Quoted("case", "a"), Quoted("exposing_member", 0.0),
        Derived("exactness", "certified_exact"), Derived("sdp_value", -kSqrt3Half, 1e-6),
        Derived("rank_one_confident", 1.0)};
  } else if (id == "ex6.1-reduced") {
    c.title = "reduced 2 x 2 problem of the alpha-beta counterexample";
    c.problem.n = 2;
    c.problem.q = SymMat::Diagonal({1, -1});
    c.problem.h = SymMat::Identity(2);
    c.problem.bset = SetOf(2, {SymMat::FromRows({{-1, -2}, {-2, -1}}),
                               SymMat::FromRows({{1, 2}, {2, 1}})});
    c.expected = {Derived("exactness", "certified_exact"),
                  Derived("sdp_value", -kSqrt3Half, 1e-6),
                  Derived("oracle_value", -kSqrt3Half, 1e-6),
                  Derived("x1x2", -0.25, 1e-6), Derived("eigenratio_ok", 1.0)};
  } else if (id == "fig1" || id == "fig1-r1") {
    const double r = id == "fig1" ? 0.5 : 1.0;
    c.title = "single-constraint regions B1..B6, r = " + std::to_string(r);
    c.problem = InequalityForm(SetOf(3, FigureOneForms(r)), Vec({0.2, 0.1}));
    c.subsets = {{0, 5}};
    for (int k = 1; k <= 6; ++k) {
      c.expected.push_back(Quoted("c_prime_B" + std::to_string(k), "holds"));
    }
    c.expected.push_back(Quoted("combo_B1B6", "certified"));
    c.plot_box = Rect{-2, 2, -2, 2};
  } else if (id == "fig1-combos") {
    c.title = "combinations of the single-constraint regions (r = 1/2)";
    c.problem = InequalityForm(SetOf(3, FigureOneForms(0.5)), Vec({0.2, 0.1}));
    c.subsets = {{0, 1, 2}, {0, 5}, {0, 2, 4}, {1, 3}};
    c.expected = {Quoted("combo_B1B2B3", "certified"), Quoted("combo_B1B6", "certified"),
                  Quoted("combo_B1B3B5", "certified"), Quoted("combo_B2B4", "certified")};
  } else if (id == "fig1-overlap") {
    c.title = "two overlapping disks";
    c.problem = InequalityForm(
        SetOf(3, {BallMatrix(Vec({0, 0}), 0.5), BallMatrix(Vec({0.5, 0}), 0.5)}),
        Vec({0.25, 0.1}));
    c.expected = {Derived("bprime_cprime", "not_certified"),
                  Derived("q_quarter_b1", -0.1875, 1e-12),
                  Derived("q_quarter_b2", -0.1875, 1e-12), Derived("witness_valid", 1.0)};
    c.plot_box = Rect{-1, 1.5, -1, 1};
  } else if (id == "fig2") {
    c.title = "ring of eight disks inside an annulus";
    std::vector<SymMat> m;
    for (int k = 0; k < 8; ++k) {
      const double t = k * std::numbers::pi / 4.0;
      m.push_back(BallMatrix(Vec({1.5 * std::cos(t), 1.5 * std::sin(t)}), 0.5));
    }
    m.push_back(SymMat::Diagonal({1, 1, -1}));
    m.push_back(SymMat::Diagonal({-1, -1, 4}));
    // Off the centre of the removed disk so that the nearest point is unique.
    c.problem = InequalityForm(SetOf(3, std::move(m)), Vec({1.6, 0.05}));
    c.plot_box = Rect{-2.5, 2.5, -2.5, 2.5};
    const double gap = 0.5 - std::hypot(0.1, 0.05);
    // Annulus 1 <= |u| <= 2 minus eight disjoint disks of radius 1/2.
    const double area = std::numbers::pi / 25.0;
    c.expected = {Quoted("bprime_cprime", "certified"),
                  Derived("gray_fraction", area, 0.01 * area),
                  Derived("raster_agreement", 1.0),
                  Derived("region_min_distance2", gap * gap, 1e-6),
                  Derived("exactness", "certified_exact"),
                  Derived("rank_one_confident", 1.0)};
  } else if (id == "ex6.2") {
    c.title = "ball constraints centred on the integer lattice in [-2, 2]^2";
    c.problem = InequalityForm(BallLattice(2.0), Vec({2.2, 0.1}));
    c.expected = {Derived("members", 25.0), Derived("pairs", 300.0),
                  Derived("pairs_certified", 300.0), Derived("exactness", "certified_exact"),
                  Derived("rank_one_confident", 1.0), Derived("rank_one_residual", 0.0, 1e-5),
                  Derived("monotone", 1.0)};
  } else if (id == "ex6.3") {
    c.title = "hyperbola constraints with a = (0, 1, 2, 4)";
    c.problem = InequalityForm(HyperbolaSet(), Vec({1.0, 1.5}));
    c.expected = {Quoted("bprime", "holds"), Quoted("cprime", "holds"),
                  Quoted("limit_psd", 1.0), Quoted("limit_cprime", "fails"),
                  Derived("exactness", "certified_exact")};
    c.plot_box = Rect{-3, 3, -3, 3};
  } else if (id == "ex6.3-ext") {
    c.title = "hyperbola constraints lifted to R^4 by L = (b, c, e)";
    const MatrixXd l = HyperbolaExtension();
    ConstraintSet s = HyperbolaSet();
    ConstraintSet lifted;
    lifted.n = 4;
    for (const SymMat& b : s.members) lifted.members.push_back(Congruence(b, l));
    c.problem = InequalityForm(std::move(lifted), Vec({1.0, 1.5, 0.0}));
    c.expected = {Quoted("condition_b", "certified")};
  } else if (id == "ex6.4") {
    c.title = "generalized hyperbolas, lambda = 1, l = 1, sigma = 0";
    c.problem = InequalityForm(SetOf(3, {GeneralizedMember(0.0)}), Vec({0.0, 0.0}));
    c.expected = {Derived("tau_found", 1.0), Derived("bprime_cprime", "certified"),
                  Quoted("sigma_member_matches", 0.0)};
  } else if (id == "ex6.5-fig6b") {
    c.title = "three rotated parabolas, lambda = (16, 1)";
    ParabolaSet ps;
    for (double deg : {0.0, 120.0, 240.0}) ps.members.push_back({{16.0, 1.0}, 1, Rotation(deg)});
    c.problem = InequalityForm(BuildFamily(ps, 3), Vec({3.0, 0.0}));
    c.plot_box = Rect{-4, 4, -4, 4};
    c.expected = {Quoted("bprime_cprime", "certified"), Derived("raster_agreement", 1.0),
                  Derived("exactness", "certified_exact")};
  } else if (id == "ex6.5-fig6c") {
    c.title = "parabola band: B1 = P(16, 3), B2 = -P(16, 1)";
    ParabolaSet ps;
    ps.members.push_back({{16.0, 3.0}, 1, {}});
    ps.members.push_back({{16.0, 1.0}, -1, {}});
    c.problem = InequalityForm(BuildFamily(ps, 3), Vec({5.0, 0.0}));
    c.plot_box = Rect{-1, 7, -4, 4};
    c.expected = {Quoted("bprime_cprime", "certified"), Derived("raster_agreement", 1.0),
                  Derived("exactness", "certified_exact")};
  } else {
    throw std::invalid_argument("unknown gallery id: " + id);
  }
  return c;
}

bool AcceptanceReport::AllPassed() const {
  for (const AcceptanceEntry& e : entries) {
    if (!e.passed) return false;
  }
  return true;
}

AcceptanceReport RunAcceptance(const std::vector<std::string>& ids, long samples) {
  AcceptanceReport report;
  for (const std::string& id : ids) {
    Observations obs;
    GalleryCase c;
    try {
      c = BuildCase(id);
      if (id == "ex6.1") {
        obs = ObserveEx61(c);
      } else if (id == "ex6.1-reduced") {
        obs = ObserveEx61Reduced(c, samples);
      } else if (id == "fig1" || id == "fig1-r1" || id == "fig1-combos") {
        obs = ObserveSlices(c);
      } else if (id == "fig1-overlap") {
        obs = ObserveOverlap(c);
      } else if (id == "fig2") {
        obs = ObserveFig2(c);
      } else if (id == "ex6.2") {
        obs = ObserveEx62(c);
      } else if (id == "ex6.3") {
        obs = ObserveEx63(c);
      } else if (id == "ex6.3-ext") {
        obs = ObserveEx63Ext(c);
      } else if (id == "ex6.4") {
        obs = ObserveEx64(c);
      } else {
        obs = ObserveParabola(c);
      }
    } catch (const std::exception& e) {
      report.entries.push_back({id, "error", false, e.what(), "no error", -1.0});
      continue;
    }
    for (const Expectation& x : c.expected) {
      AcceptanceEntry e;
      e.case_id = id;
      e.key = x.key;
      e.expected = Show(x.value);
      const auto it = obs.find(x.key);
      if (it == obs.end()) {
        e.observed = "missing";
        e.margin = -1.0;
      } else {
        e.observed = Show(it->second);
        if (const auto* want = std::get_if<double>(&x.value)) {
          const auto* got = std::get_if<double>(&it->second);
          const double diff = got ? std::abs(*got - *want) : std::numeric_limits<double>::infinity();
          e.margin = x.tol - diff;
          e.passed = diff <= x.tol;
        } else {
          e.passed = it->second == x.value;
          e.margin = e.passed ? 0.0 : -1.0;
        }
      }
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

}  // namespace exactsdp
