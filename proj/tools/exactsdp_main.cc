// Command-line front end. The result document goes to stdout (or --out),
// diagnostics to stderr. Exit codes: 0 success or certified, 1 error,
// 2 not certified, 3 inconclusive.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "exactsdp/certify.h"
#include "exactsdp/exact.h"
#include "exactsdp/gallery.h"
#include "exactsdp/oracle.h"
#include "exactsdp/plot.h"
#include "exactsdp/problem_io.h"
#include "exactsdp/reduce.h"

namespace {

using exactsdp::Json;

constexpr int kExitError = 1;
constexpr int kExitNotCertified = 2;
constexpr int kExitInconclusive = 3;

struct Flags {
  std::string input;
  std::string out;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  long samples = exactsdp::kDefaultOracleSamples;
  int resolution = 800;
  std::vector<double> box;
  std::vector<std::string> ids;
  bool list = false;
  bool run = false;
  std::string case_id;
  bool tol_set = false;
  bool seed_set = false;
};

std::string ReadAll(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Emit(const Json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  const std::string tmp = out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
  }
  std::filesystem::rename(tmp, out);
}

int ExitFor(exactsdp::Overall o) {
  switch (o) {
    case exactsdp::Overall::kCertified: return 0;
    case exactsdp::Overall::kNotCertified: return kExitNotCertified;
    case exactsdp::Overall::kInconclusive: return kExitInconclusive;
  }
  return kExitError;
}

exactsdp::ProblemDocument Load(const Flags& f) {
  exactsdp::ProblemDocument d = exactsdp::ParseProblem(ReadAll(f.input));
  if (f.tol_set) d.options.tol = f.tol;
  if (f.seed_set) d.options.seed = f.seed;
  return d;
}

exactsdp::Rect BoxFrom(const Flags& f, const exactsdp::Rect& fallback) {
  if (f.box.empty()) return fallback;
  if (f.box.size() != 4) throw std::invalid_argument("--box takes x_lo x_hi y_lo y_hi");
  return {f.box[0], f.box[1], f.box[2], f.box[3]};
}

int Certify(const Flags& f) {
  const auto d = Load(f);
  const exactsdp::ConstraintSet s = exactsdp::Normalize(d.problem.bset);
  const exactsdp::CertReport r = exactsdp::Certify(s, d.options.tol);
  Emit({{"command", "certify"}, {"certification", exactsdp::ToJson(r)}}, f.out);
  return ExitFor(r.overall);
}

int Reduce(const Flags& f) {
  const auto d = Load(f);
  exactsdp::GeoCop p = d.problem;
  p.bset = exactsdp::Normalize(p.bset);
  const exactsdp::ReductionResult r = exactsdp::FacialReduce(p, d.options.tol);
  const exactsdp::PruneResult pr = exactsdp::RemoveRedundant(r.reduced.bset, d.options.tol);
  Emit({{"command", "reduce"},
        {"reduction", exactsdp::ToJson(r)},
        {"pruning", {{"kept", pr.kept_indices}, {"removed", pr.removed_indices}}}},
       f.out);
  return 0;
}

int SolveCmd(const Flags& f) {
  const auto d = Load(f);
  const exactsdp::GeoCop& p = d.problem;
  exactsdp::SdpProblem sdp;
  sdp.n = p.n;
  sdp.objective = p.q;
  sdp.eq_constraints.emplace_back(p.h, 1.0);
  for (const auto& b : p.bset.members) sdp.ineq_constraints.push_back({b, exactsdp::Sense::kGe, 0.0});
  const exactsdp::SdpSolution s = exactsdp::Solve(sdp, d.options.tol);
  Json out{{"command", "solve"}, {"sdp", exactsdp::ToJson(s)}};
  if (exactsdp::Usable(s)) {
    exactsdp::PipelineConfig cfg;
    cfg.tol = d.options.tol;
    cfg.seed = d.options.seed;
    out["rank_one"] = exactsdp::ToJson(exactsdp::ExtractRankOne(s.x, p, cfg));
  }
  Emit(out, f.out);
  return exactsdp::Usable(s) ? 0 : kExitError;
}

int OracleCmd(const Flags& f) {
  const auto d = Load(f);
  const exactsdp::GeoCop& p = d.problem;
  exactsdp::OracleResult r;
  std::string method;
  if (exactsdp::LambdaMin(p.h) > 0.0) {
    method = "sphere";
    r = exactsdp::SolveSphere(p, f.samples, d.options.seed);
  } else if (p.n == 3 && p.h == exactsdp::LastUnit(3)) {
    method = "region_2d";
    r = exactsdp::SolveRegion2d(p.bset, p.q, BoxFrom(f, {-5, 5, -5, 5}), f.resolution);
  } else {
    throw std::invalid_argument("oracle needs H positive definite, or n = 3 with H = e_n e_n^T");
  }
  Emit({{"command", "oracle"}, {"method", method}, {"oracle", exactsdp::ToJson(r)}}, f.out);
  return r.feasible ? 0 : kExitError;
}

int PipelineCmd(const Flags& f) {
  const auto d = Load(f);
  exactsdp::PipelineConfig cfg;
  cfg.tol = d.options.tol;
  cfg.seed = d.options.seed;
  const exactsdp::PipelineVerdict v = exactsdp::RunPipeline(d.problem, cfg);
  Emit({{"command", "pipeline"}, {"verdict", exactsdp::ToJson(v)}}, f.out);
  if (v.reduction.reduced_n == 0) return kExitInconclusive;
  return ExitFor(v.cert.overall);
}

int GalleryCmd(const Flags& f) {
  if (f.list) {
    Json ids = Json::array();
    for (const auto& id : exactsdp::GalleryIds()) {
      ids.push_back({{"id", id}, {"title", exactsdp::BuildCase(id).title}});
    }
    Emit({{"command", "gallery"}, {"cases", ids}}, f.out);
    return 0;
  }
  const std::vector<std::string> ids = f.ids.empty() ? exactsdp::GalleryIds() : f.ids;
  if (f.run) {
    const exactsdp::AcceptanceReport r = exactsdp::RunAcceptance(ids, f.samples);
    Emit({{"command", "gallery"}, {"acceptance", exactsdp::ToJson(r)}}, f.out);
    return r.AllPassed() ? 0 : kExitNotCertified;
  }
  Json cases = Json::array();
  for (const auto& id : ids) {
    const exactsdp::GalleryCase c = exactsdp::BuildCase(id);
    Json expected = Json::array();
    for (const auto& e : c.expected) {
      Json v = std::holds_alternative<double>(e.value)
                   ? Json(exactsdp::DecimalString(std::get<double>(e.value)))
                   : Json(std::get<std::string>(e.value));
      expected.push_back({{"key", e.key},
                          {"value", v},
                          {"tol", exactsdp::DecimalString(e.tol)},
                          {"origin", e.origin == exactsdp::Origin::kQuoted ? "quoted" : "derived"}});
    }
    cases.push_back({{"id", c.id},
                     {"title", c.title},
                     {"problem", exactsdp::SerializeProblem({c.problem, {}})},
                     {"expected", expected}});
  }
  Emit({{"command", "gallery"}, {"cases", cases}}, f.out);
  return 0;
}

int PlotCmd(const Flags& f) {
  exactsdp::ConstraintSet s;
  exactsdp::Rect box{-2, 2, -2, 2};
  if (!f.case_id.empty()) {
    const exactsdp::GalleryCase c = exactsdp::BuildCase(f.case_id);
    s = c.problem.bset;
    if (c.plot_box) box = *c.plot_box;
  } else {
    s = Load(f).problem.bset;
  }
  box = BoxFrom(f, box);
  if (f.out.empty()) throw std::invalid_argument("plot needs --out <stem>");
  const exactsdp::Raster r = exactsdp::EmitPlot(s, box, f.resolution, f.out);
  Json doc{{"command", "plot"},
           {"ppm", f.out + ".ppm"},
           {"svg", f.out + ".svg"},
           {"resolution", f.resolution},
           {"feasible_fraction", exactsdp::DecimalString(r.FeasibleFraction())}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exactness certificates for SDP relaxations of QCQPs"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", f.input, "problem document (JSON); '-' for stdin");
    if (needs_input) in->required();
    sub->add_option("--out", f.out, "write the result document here instead of stdout");
    sub->add_option("--tol", f.tol, "tolerance (default 1e-8)")->each([&](const std::string&) { f.tol_set = true; });
    sub->add_option("--seed", f.seed, "random seed (default 0)")->each([&](const std::string&) { f.seed_set = true; });
  };

  auto* certify = app.add_subcommand("certify", "check conditions (A-1)-(A-5), (B), (B)', (C)'");
  common(certify, true);
  auto* reduce = app.add_subcommand("reduce", "facial reduction and pruning");
  common(reduce, true);
  auto* solve = app.add_subcommand("solve", "solve the SDP relaxation and extract a rank-one point");
  common(solve, true);
  auto* oracle = app.add_subcommand("oracle", "brute-force reference value");
  common(oracle, true);
  oracle->add_option("--samples", f.samples, "sphere samples");
  oracle->add_option("--resolution", f.resolution, "raster resolution for n = 3 inequality form");
  oracle->add_option("--box", f.box, "x_lo x_hi y_lo y_hi")->expected(4);
  auto* pipeline = app.add_subcommand("pipeline", "normalize, reduce, prune, certify, solve, extract");
  common(pipeline, true);
  auto* gallery = app.add_subcommand("gallery", "built-in cases and their expectations");
  gallery->add_option("ids", f.ids, "case ids (default: all)");
  gallery->add_flag("--list", f.list, "list case ids");
  gallery->add_flag("--run", f.run, "evaluate the expectations");
  gallery->add_option("--samples", f.samples, "oracle samples for --run");
  gallery->add_option("--out", f.out, "write the result document here");
  auto* plot = app.add_subcommand("plot", "raster (PPM) and SVG of the region q(u, 1, B) >= 0");
  common(plot, false);
  plot->add_option("--case", f.case_id, "gallery case instead of --input");
  plot->add_option("--resolution", f.resolution, "pixels per side (default 800)");
  plot->add_option("--box", f.box, "x_lo x_hi y_lo y_hi")->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*certify) return Certify(f);
    if (*reduce) return Reduce(f);
    if (*solve) return SolveCmd(f);
    if (*oracle) return OracleCmd(f);
    if (*pipeline) return PipelineCmd(f);
    if (*gallery) return GalleryCmd(f);
    if (*plot) return PlotCmd(f);
  } catch (const exactsdp::ParseError& e) {
    std::cerr << Json{{"error", e.what()}, {"path", e.path()}}.dump() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return kExitError;
  }
  return kExitError;
}
