#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "exactsdp/model.h"
#include "exactsdp/oracle.h"
#include "exactsdp/symmat.h"

namespace exactsdp {

/// Whether an expected value is a published figure or computed
/// independently (closed form, search or oracle).
enum class Origin { kQuoted, kDerived };

using Observed = std::variant<double, std::string>;

struct Expectation {
  std::string key;
  Observed value;
  double tol = 0.0;  // numbers only
  Origin origin = Origin::kDerived;
};

struct GalleryCase {
  std::string id;
  std::string title;
  /// Members plus an objective. Cases without a natural objective use the
  /// squared distance to a point with H = e_n e_n^T.
  GeoCop problem;
  /// Member index lists that are checked as separate sets.
  std::vector<std::vector<int>> subsets;
  std::optional<Rect> plot_box;
  std::vector<Expectation> expected;
};

/// Stable ids accepted by BuildCase.
std::vector<std::string> GalleryIds();

/// Throws std::invalid_argument for an unknown id.
GalleryCase BuildCase(const std::string& id);

/// [I, -c; -c^T, c^T c]: q(u, 1, .) = ||u - c||^2.
SymMat DistanceObjective(const Eigen::VectorXd& c);

/// e_n e_n^T.
SymMat LastUnit(int n);

/// Forms of the six single-constraint panels, B1..B6, for parameter r.
std::vector<SymMat> FigureOneForms(double r);

struct AcceptanceEntry {
  std::string case_id;
  std::string key;
  bool passed = false;
  std::string observed;
  std::string expected;
  /// Slack to the tolerance for numeric checks (negative when failing).
  double margin = 0.0;
};

struct AcceptanceReport {
  std::vector<AcceptanceEntry> entries;
  bool AllPassed() const;
};

/// Evaluates every expectation of the listed cases. `samples` bounds the
/// oracle runs. Errors inside a case become failing entries.
AcceptanceReport RunAcceptance(const std::vector<std::string>& ids,
                               long samples = kDefaultOracleSamples);

}  // namespace exactsdp
