#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "exactsdp/certify.h"
#include "exactsdp/exact.h"
#include "exactsdp/gallery.h"
#include "exactsdp/model.h"
#include "exactsdp/oracle.h"
#include "exactsdp/reduce.h"
#include "exactsdp/sdp.h"

namespace exactsdp {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Schema violation; path() is a JSON path such as "$.constraints[2].radius".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ProblemOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct ProblemDocument {
  GeoCop problem;
  ProblemOptions options;
};

/// Parses a problem document (see docs/schema.md). Family descriptors are
/// realized through BuildFamily or, with a truncation box, Discretize.
ProblemDocument ParseProblem(const std::string& text);

/// Canonical form: explicit constraint matrices, numbers as shortest
/// round-trip decimal strings.
Json SerializeProblem(const ProblemDocument& doc);

/// Decimal string that parses back to exactly v.
std::string DecimalString(double v);
/// Accepts decimal strings ("-0.5", "1e-8"), simple fractions ("1/4") and
/// JSON numbers.
double ParseNumber(const Json& j, const std::string& path);

Json ToJson(const SymMat& m);
Json ToJson(const Eigen::VectorXd& v);
Json ToJson(const CertReport& r);
Json ToJson(const ReductionResult& r);
Json ToJson(const SdpSolution& s);
Json ToJson(const RankOneResult& r);
Json ToJson(const PipelineVerdict& v);
Json ToJson(const OracleResult& r);
Json ToJson(const AcceptanceReport& r);

}  // namespace exactsdp
