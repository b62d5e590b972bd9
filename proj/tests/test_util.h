#pragma once

#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "exactsdp/model.h"
#include "exactsdp/symmat.h"

namespace exactsdp::testing {

inline Eigen::VectorXd V(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline SymMat RandomSym(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  SymMat m(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) m.Set(i, j, nd(rng));
  }
  return m;
}

inline Eigen::VectorXd RandomVec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

// Random PSD matrix of rank at most `rank`, trace about rank.
inline SymMat RandomPsd(std::mt19937_64& rng, int n, int rank) {
  SymMat x(n);
  for (int k = 0; k < rank; ++k) x += Gram(RandomVec(rng, n) / std::sqrt(double(n)));
  return x;
}

inline ConstraintSet Set(int n, std::vector<SymMat> members) {
  ConstraintSet s;
  s.n = n;
  s.members = std::move(members);
  return s;
}

// Example 6.1 matrices as displayed in the source text.
inline SymMat ExampleA4() {
  return SymMat::FromRows({{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}});
}
inline SymMat ExampleB4() {
  return SymMat::FromRows({{-1, -2, 0, -1}, {-2, -1, 0, 0}, {0, 0, 1, -1}, {-1, 0, -1, -1}});
}
inline SymMat ExampleC4() {
  return SymMat::FromRows({{1, 2, 0, 1}, {2, 1, 0, 0}, {0, 0, -3, 2}, {1, 0, 2, -1}});
}
inline SymMat ExampleA2() { return SymMat::FromRows({{2, 1}, {1, 1}}); }
inline SymMat ExampleB2() { return SymMat::FromRows({{-1, -2}, {-2, -1}}); }
inline SymMat ExampleC2() { return SymMat::FromRows({{1, 2}, {2, 1}}); }

// min cos(2t) over t with sin(2t) = -1/2, the unit-circle form of the reduced
// problem, on a fine angle grid refined by bisection on the constraint.
inline double AngleGridReducedMin() {
  double best = 1e300;
  const int steps = 200000;
  for (int k = 0; k < steps; ++k) {
    double a = 2.0 * M_PI * k / steps;
    double b = 2.0 * M_PI * (k + 1) / steps;
    auto g = [](double t) { return std::sin(2.0 * t) + 0.5; };
    if (g(a) * g(b) > 0.0) continue;
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (a + b);
      if (g(a) * g(m) <= 0.0) b = m; else a = m;
    }
    best = std::min(best, std::cos(a + b));
  }
  return best;
}

// Max |entry| of the difference.
inline double MaxDiff(const SymMat& a, const SymMat& b) {
  return (a.ToDense() - b.ToDense()).cwiseAbs().maxCoeff();
}

}  // namespace exactsdp::testing
