#include "exactsdp/problem_io.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace exactsdp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string At(const std::string& path, const std::string& key) { return path + "." + key; }
std::string At(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& Field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(At(path, key), "missing field");
  return *it;
}

const Json* OptionalField(const Json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const Json& Array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

int ParseInt(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<int>();
  const double v = ParseNumber(j, path);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ParseError(path, "expected an integer");
  return static_cast<int>(v);
}

std::vector<double> ParseVector(const Json& j, const std::string& path) {
  Array(j, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(ParseNumber(j[i], At(path, i)));
  return out;
}

VectorXd ToEigen(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Flat row-major upper triangle, or a full symmetric array of rows.
SymMat ParseMatrix(const Json& j, int n, const std::string& path) {
  Array(j, path);
  SymMat m(n);
  if (!j.empty() && j[0].is_array()) {
    if (static_cast<int>(j.size()) != n) throw ParseError(path, "expected " + std::to_string(n) + " rows");
    for (int i = 0; i < n; ++i) {
      const std::string rp = At(path, i);
      const std::vector<double> row = ParseVector(j[i], rp);
      if (static_cast<int>(row.size()) != n) throw ParseError(rp, "expected " + std::to_string(n) + " entries");
      for (int k = 0; k < n; ++k) {
        if (k < i && row[k] != m(i, k)) throw ParseError(At(rp, k), "matrix is not symmetric");
        m.Set(i, k, row[k]);
      }
    }
    return m;
  }
  const std::size_t want = static_cast<std::size_t>(n) * (n + 1) / 2;
  if (j.size() != want) {
    throw ParseError(path, "expected " + std::to_string(want) + " upper-triangle entries");
  }
  std::size_t pos = 0;
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k, ++pos) m.Set(i, k, ParseNumber(j[pos], At(path, pos)));
  }
  return m;
}

MatrixXd ParseDense(const Json& j, int rows, int cols, const std::string& path) {
  Array(j, path);
  if (static_cast<int>(j.size()) != rows) throw ParseError(path, "expected " + std::to_string(rows) + " rows");
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const std::vector<double> row = ParseVector(j[i], At(path, i));
    if (static_cast<int>(row.size()) != cols) {
      throw ParseError(At(path, i), "expected " + std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) m(i, k) = row[k];
  }
  return m;
}

std::optional<DiscretizationConfig> ParseTruncation(const Json& c, const std::string& path) {
  const Json* box = OptionalField(c, "box");
  if (!box) return std::nullopt;
  const std::string bp = At(path, "box");
  DiscretizationConfig cfg;
  cfg.box.lo = ParseNumber(Field(*box, "lo", bp), At(bp, "lo"));
  cfg.box.hi = ParseNumber(Field(*box, "hi", bp), At(bp, "hi"));
  if (!(cfg.box.lo <= cfg.box.hi)) throw ParseError(bp, "lo must not exceed hi");
  const Json* eps = OptionalField(c, "epsilon");
  cfg.epsilon_schedule = {eps ? ParseNumber(*eps, At(path, "epsilon")) : 1.0};
  return cfg;
}

ConstraintSet ParseConstraint(const Json& c, int n, const std::string& path) {
  const Json& kind_j = Field(c, "kind", path);
  if (!kind_j.is_string()) throw ParseError(At(path, "kind"), "expected a string");
  const std::string kind = kind_j.get<std::string>();
  ConstraintFamily family;
  if (kind == "explicit") {
    ExplicitFamily f;
    if (const Json* one = OptionalField(c, "matrix")) {
      f.members.push_back(ParseMatrix(*one, n, At(path, "matrix")));
    } else {
      const std::string mp = At(path, "members");
      const Json& ms = Array(Field(c, "members", path), mp);
      for (std::size_t i = 0; i < ms.size(); ++i) f.members.push_back(ParseMatrix(ms[i], n, At(mp, i)));
    }
    family = f;
  } else if (kind == "ball_grid") {
    BallGrid f;
    f.radius = ParseNumber(Field(c, "radius", path), At(path, "radius"));
    if (const Json* st = OptionalField(c, "lattice_step")) f.lattice_step = ParseInt(*st, At(path, "lattice_step"));
    if (const Json* cs = OptionalField(c, "centers")) {
      const std::string cp = At(path, "centers");
      Array(*cs, cp);
      for (std::size_t i = 0; i < cs->size(); ++i) {
        f.centers.push_back(ToEigen(ParseVector((*cs)[i], At(cp, i))));
      }
    }
    family = f;
  } else if (kind == "hyperbola_seq") {
    HyperbolaSeq f;
    f.breakpoints = ParseVector(Field(c, "breakpoints", path), At(path, "breakpoints"));
    f.r_squared = ParseNumber(Field(c, "r_squared", path), At(path, "r_squared"));
    if (const Json* lim = OptionalField(c, "limit")) f.limit = ParseNumber(*lim, At(path, "limit"));
    family = f;
  } else if (kind == "parabola_set") {
    ParabolaSet f;
    const std::string mp = At(path, "members");
    const Json& ms = Array(Field(c, "members", path), mp);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string ip = At(mp, i);
      ParabolaMember m;
      m.lambdas = ParseVector(Field(ms[i], "lambdas", ip), At(ip, "lambdas"));
      if (const Json* s = OptionalField(ms[i], "sign")) m.sign = ParseInt(*s, At(ip, "sign"));
      if (const Json* t = OptionalField(ms[i], "transform")) {
        m.transform = ParseDense(*t, n, n, At(ip, "transform"));
      }
      f.members.push_back(std::move(m));
    }
    family = f;
  } else if (kind == "generalized_hyperbola") {
    GeneralizedHyperbola f;
    f.lambda = ToEigen(ParseVector(Field(c, "lambda", path), At(path, "lambda")));
    f.split = ParseInt(Field(c, "split", path), At(path, "split"));
    if (const Json* s = OptionalField(c, "sigmas")) f.sigmas = ParseVector(*s, At(path, "sigmas"));
    family = f;
  } else {
    throw ParseError(At(path, "kind"), "unknown constraint kind '" + kind + "'");
  }
  try {
    if (auto cfg = ParseTruncation(c, path)) return Discretize(family, *cfg, 0, n);
    return BuildFamily(family, n);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
}

Json Packed(const SymMat& m) {
  Json out = Json::array();
  for (int i = 0; i < m.n(); ++i) {
    for (int k = i; k < m.n(); ++k) out.push_back(DecimalString(m(i, k)));
  }
  return out;
}

Json Rows(const MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(DecimalString(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

Json Num(double v) { return DecimalString(v); }

template <class T>
Json Optional(const std::optional<T>& v) {
  return v ? ToJson(*v) : Json(nullptr);
}

}  // namespace

std::string DecimalString(double v) {
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double ParseNumber(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ParseError(path, "expected a number or decimal string");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  auto whole = [&](const std::string& part) {
    if (part.empty()) throw ParseError(path, "malformed number '" + s + "'");
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (end != part.c_str() + part.size() || !std::isfinite(v)) {
      throw ParseError(path, "malformed number '" + s + "'");
    }
    return v;
  };
  if (slash == std::string::npos) return whole(s);
  const double num = whole(s.substr(0, slash));
  const double den = whole(s.substr(slash + 1));
  if (den == 0.0) throw ParseError(path, "zero denominator");
  return num / den;
}

ProblemDocument ParseProblem(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  const std::string root = "$";
  if (const Json* v = OptionalField(doc, "schema_version")) {
    if (ParseInt(*v, "$.schema_version") != kSchemaVersion) {
      throw ParseError("$.schema_version", "unsupported version");
    }
  }
  ProblemDocument out;
  GeoCop& p = out.problem;
  p.n = ParseInt(Field(doc, "n", root), "$.n");
  if (p.n < 1) throw ParseError("$.n", "must be positive");
  p.q = ParseMatrix(Field(doc, "Q", root), p.n, "$.Q");
  p.h = ParseMatrix(Field(doc, "H", root), p.n, "$.H");
  p.bset.n = p.n;
  if (const Json* cs = OptionalField(doc, "constraints")) {
    Array(*cs, "$.constraints");
    for (std::size_t i = 0; i < cs->size(); ++i) {
      const ConstraintSet s = ParseConstraint((*cs)[i], p.n, At("$.constraints", i));
      p.bset.members.insert(p.bset.members.end(), s.members.begin(), s.members.end());
      if (!s.truncation.empty()) {
        p.bset.truncation += (p.bset.truncation.empty() ? "" : "; ") + s.truncation;
      }
      if (cs->size() == 1) p.bset.family = s.family;
    }
  }
  if (const Json* l = OptionalField(doc, "congruence")) {
    Array(*l, "$.congruence");
    const int cols = l->empty() || !(*l)[0].is_array() ? 0 : static_cast<int>((*l)[0].size());
    p.congruence = ParseDense(*l, p.n, cols, "$.congruence");
  }
  if (const Json* o = OptionalField(doc, "options")) {
    if (const Json* t = OptionalField(*o, "tol")) out.options.tol = ParseNumber(*t, "$.options.tol");
    if (const Json* s = OptionalField(*o, "seed")) {
      if (!s->is_number_unsigned()) throw ParseError("$.options.seed", "expected a nonnegative integer");
      out.options.seed = s->get<std::uint64_t>();
    }
    if (!(out.options.tol > 0.0)) throw ParseError("$.options.tol", "must be positive");
  }
  return out;
}

Json SerializeProblem(const ProblemDocument& d) {
  const GeoCop& p = d.problem;
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["n"] = p.n;
  out["Q"] = Packed(p.q);
  out["H"] = Packed(p.h);
  Json cs = Json::array();
  for (const SymMat& b : p.bset.members) {
    Json c;
    c["kind"] = "explicit";
    c["matrix"] = Packed(b);
    cs.push_back(std::move(c));
  }
  out["constraints"] = std::move(cs);
  if (p.congruence) out["congruence"] = Rows(*p.congruence);
  out["options"] = {{"tol", Num(d.options.tol)}, {"seed", d.options.seed}};
  return out;
}

Json ToJson(const SymMat& m) { return Rows(m.ToDense()); }

Json ToJson(const VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(DecimalString(v(i)));
  return out;
}

Json ToJson(const CertReport& r) {
  Json out;
  out["overall"] = OverallName(r.overall);
  const StructuralReport& s = r.structural;
  Json incl = Json::array();
  for (const auto& [i, j] : s.inclusions) incl.push_back({i, j});
  out["structural"] = {{"a1", s.a1}, {"a3", s.a3}, {"a4", s.a4}, {"a5", s.a5},
                       {"slater_margin", Num(s.slater_margin)},
                       {"psd_members", s.psd_members}, {"inclusions", incl}};
  Json pairs = Json::array();
  for (const PairVerdict& p : r.b.pairs) {
    Json pj;
    pj["i"] = p.i;
    pj["j"] = p.j;
    pj["status"] = VerdictName(p.status);
    pj["certificate"] = p.certificate
                            ? Json{{"alpha", Num(p.certificate->first)}, {"beta", Num(p.certificate->second)}}
                            : Json(nullptr);
    pj["witness"] = Optional(p.witness);
    pj["witness_swapped"] = p.witness_swapped;
    pj["margin"] = Num(p.margin);
    pj["zeta0_ab"] = Num(p.zeta0_ab);
    pj["zeta0_ba"] = Num(p.zeta0_ba);
    pj["zeta_ab"] = Num(p.zeta_ab);
    pj["zeta_ba"] = Num(p.zeta_ba);
    pairs.push_back(std::move(pj));
  }
  out["condition_b"] = {{"overall", OverallName(r.b.overall)}, {"pairs", pairs}};
  if (r.bc_prime) {
    const BprimeCprimeReport& bc = *r.bc_prime;
    Json slices = Json::array();
    for (const SliceVerdict& v : bc.b_prime) {
      Json sj;
      sj["i"] = v.i;
      sj["j"] = v.j;
      sj["status"] = VerdictName(v.status);
      sj["route"] = v.route;
      sj["certificate"] = v.certificate
                              ? Json{{"alpha", Num(v.certificate->first)}, {"beta", Num(v.certificate->second)}}
                              : Json(nullptr);
      sj["witness_u"] = Optional(v.witness_u);
      sj["witness_swapped"] = v.witness_swapped;
      sj["q_i"] = Num(v.q_i);
      sj["q_j"] = Num(v.q_j);
      slices.push_back(std::move(sj));
    }
    Json members = Json::array();
    for (const MemberVerdict& m : bc.c_prime) {
      members.push_back({{"index", m.index},
                         {"holds", m.holds},
                         {"witness_u", Optional(m.witness_u)},
                         {"witness_value", Num(m.witness_value)},
                         {"infimum", Num(m.infimum)},
                         {"sdp_status", StatusName(m.sdp_status)},
                         {"sdp_value", Num(m.sdp_value)}});
    }
    out["slices"] = {{"overall", OverallName(bc.overall)},
                     {"b_prime_holds", bc.b_prime_holds},
                     {"c_prime_holds", bc.c_prime_holds},
                     {"b_prime", slices},
                     {"c_prime", members}};
  } else {
    out["slices"] = nullptr;
  }
  if (r.classification) {
    const Classification& c = *r.classification;
    Json mv = Json::array();
    for (double v : c.max_values) mv.push_back(Num(v));
    out["classification"] = {{"case", c.case_a ? "a" : "b"},
                             {"exposing_index", c.exposing_index},
                             {"b0", c.b0},
                             {"max_values", mv}};
  } else {
    out["classification"] = nullptr;
  }
  return out;
}

Json ToJson(const ReductionResult& r) {
  Json out;
  out["original_n"] = r.original_n;
  out["reduced_n"] = r.reduced_n;
  out["rounds"] = r.rounds;
  out["slater_margin"] = Num(r.slater_margin);
  out["exposing"] = Optional(r.exposing);
  out["basis"] = Rows(r.basis);
  Json members = Json::array();
  for (const SymMat& b : r.reduced.bset.members) members.push_back(ToJson(b));
  out["reduced"] = {{"Q", r.reduced_n ? ToJson(r.reduced.q) : Json::array()},
                    {"H", r.reduced_n ? ToJson(r.reduced.h) : Json::array()},
                    {"members", members}};
  return out;
}

Json ToJson(const SdpSolution& s) {
  Json out;
  out["status"] = StatusName(s.status);
  out["value"] = Num(s.value);
  out["dual_value"] = Num(s.dual_value);
  out["iterations"] = s.iterations;
  out["residuals"] = {{"primal", Num(s.residuals.primal)},
                      {"dual", Num(s.residuals.dual)},
                      {"gap", Num(s.residuals.gap)}};
  out["x"] = s.x.n() > 0 ? ToJson(s.x) : Json::array();
  return out;
}

Json ToJson(const RankOneResult& r) {
  return {{"x", ToJson(r.x)},
          {"eigenratio", Num(r.eigenratio)},
          {"feas_residual", Num(r.feas_residual)},
          {"obj_gap", Num(r.obj_gap)},
          {"confident", r.confident},
          {"perturbed", r.perturbed},
          {"diagnostic", r.diagnostic}};
}

Json ToJson(const PipelineVerdict& v) {
  Json out;
  out["exactness"] = ExactnessName(v.exactness);
  out["certification"] = ToJson(v.cert);
  out["reduction"] = ToJson(v.reduction);
  out["pruning"] = {{"kept", v.pruning.kept_indices}, {"removed", v.pruning.removed_indices}};
  out["sdp"] = ToJson(v.sdp);
  out["rank_one"] = ToJson(v.rank_one);
  out["lifted_x"] = ToJson(v.lifted_x);
  out["lifted_y"] = Optional(v.lifted_y);
  return out;
}

Json ToJson(const OracleResult& r) {
  return {{"feasible", r.feasible},
          {"value", Num(r.value)},
          {"argmin", ToJson(r.argmin)},
          {"samples_used", r.samples_used},
          {"refined", r.refined},
          {"feasible_fraction", Num(r.feasible_fraction)}};
}

Json ToJson(const AcceptanceReport& r) {
  Json entries = Json::array();
  for (const AcceptanceEntry& e : r.entries) {
    entries.push_back({{"case", e.case_id},
                       {"key", e.key},
                       {"passed", e.passed},
                       {"observed", e.observed},
                       {"expected", e.expected},
                       {"margin", Num(e.margin)}});
  }
  return {{"all_passed", r.AllPassed()}, {"entries", entries}};
}

}  // namespace exactsdp
