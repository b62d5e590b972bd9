#include "exactsdp/symmat.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exactsdp {
namespace {

constexpr int kJacobiMaxSweeps = 50;
constexpr double kJacobiRelTol = 1e-14;

void CheckSameOrder(const SymMat& a, const SymMat& b, const char* what) {
  if (a.n() != b.n()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.n()) + " vs " +
                                std::to_string(b.n()) + ")");
  }
}

double OffDiagonalNorm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 1; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) s += 2.0 * a(i, j) * a(i, j);
  }
  return std::sqrt(s);
}

}  // namespace

SymMat::SymMat(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("SymMat: negative order");
  data_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
}

SymMat SymMat::Identity(int n) {
  SymMat m(n);
  for (int i = 0; i < n; ++i) m.Set(i, i, 1.0);
  return m;
}

SymMat SymMat::Diagonal(std::span<const double> d) {
  SymMat m(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    m.Set(static_cast<int>(i), static_cast<int>(i), d[i]);
  }
  return m;
}

SymMat SymMat::Diagonal(std::initializer_list<double> d) {
  return Diagonal(std::span<const double>(d.begin(), d.size()));
}

SymMat SymMat::FromDense(const Eigen::MatrixXd& m, double sym_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("SymMat::FromDense: matrix is not square");
  }
  const int n = static_cast<int>(m.rows());
  SymMat s(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      if (std::abs(m(i, j) - m(j, i)) > sym_tol) {
        throw std::invalid_argument("SymMat::FromDense: matrix is not symmetric");
      }
      s.Set(i, j, m(i, j));
    }
  }
  return s;
}

SymMat SymMat::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd m(n, n);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("SymMat::FromRows: ragged rows");
    }
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return FromDense(m);
}

SymMat SymMat::FromPacked(int n, std::vector<double> packed) {
  if (n < 0 || packed.size() != static_cast<std::size_t>(n) * (n + 1) / 2) {
    throw std::invalid_argument("SymMat::FromPacked: wrong packed length");
  }
  SymMat s;
  s.n_ = n;
  s.data_ = std::move(packed);
  return s;
}

SymMat SymMat::Smat(int n, const Eigen::VectorXd& v) {
  if (v.size() != static_cast<Eigen::Index>(n) * (n + 1) / 2) {
    throw std::invalid_argument("SymMat::Smat: wrong vector length");
  }
  return FromPacked(n, std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::MatrixXd SymMat::ToDense() const {
  Eigen::MatrixXd m(n_, n_);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i <= j; ++i) {
      m(i, j) = m(j, i) = (*this)(i, j);
    }
  }
  return m;
}

Eigen::VectorXd SymMat::Svec() const {
  return Eigen::Map<const Eigen::VectorXd>(data_.data(), static_cast<Eigen::Index>(data_.size()));
}

double SymMat::FrobeniusNorm() const { return std::sqrt(Inner(*this, *this)); }

double SymMat::Trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

bool SymMat::IsZero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return v == 0.0; });
}

bool SymMat::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

SymMat& SymMat::operator+=(const SymMat& other) {
  CheckSameOrder(*this, other, "SymMat::operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& other) {
  CheckSameOrder(*this, other, "SymMat::operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

SymMat SymMat::operator-() const {
  SymMat m = *this;
  for (double& v : m.data_) v = -v;
  return m;
}

double Inner(const SymMat& a, const SymMat& b) {
  CheckSameOrder(a, b, "Inner");
  double s = 0.0;
  for (int j = 0; j < a.n(); ++j) {
    for (int i = 0; i < j; ++i) s += 2.0 * a(i, j) * b(i, j);
    s += a(j, j) * b(j, j);
  }
  return s;
}

EigDecomp EigSym(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("EigSym: matrix is not square");
  }
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd a = x.triangularView<Eigen::Upper>();
  a.triangularView<Eigen::StrictlyLower>() = a.transpose();
  if (!a.allFinite()) throw std::invalid_argument("EigSym: non-finite entry");

  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = kJacobiRelTol * a.norm();

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (OffDiagonalNorm(a) <= threshold) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  EigDecomp out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

EigDecomp EigSym(const SymMat& x) {
  if (!x.AllFinite()) throw std::invalid_argument("EigSym: non-finite entry");
  return EigSym(x.ToDense());
}

double LambdaMin(const SymMat& x) {
  if (x.n() == 0) return 0.0;
  const EigDecomp e = EigSym(x);
  return e.values(e.values.size() - 1);
}

double LambdaMax(const SymMat& x) {
  if (x.n() == 0) return 0.0;
  return EigSym(x).values(0);
}

bool IsPsd(const SymMat& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("IsPsd: negative tolerance");
  return LambdaMin(x) >= -tol * std::max(1.0, x.FrobeniusNorm());
}

SymMat Gram(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw std::invalid_argument("Gram: empty vector");
  const int n = static_cast<int>(x.size());
  SymMat g(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) g.Set(i, j, x(i) * x(j));
  }
  return g;
}

double QuadraticForm(const SymMat& b, const Eigen::VectorXd& x) {
  if (x.size() != b.n()) {
    throw std::invalid_argument("QuadraticForm: dimension mismatch");
  }
  double s = 0.0;
  for (int j = 0; j < b.n(); ++j) {
    for (int i = 0; i < j; ++i) s += 2.0 * b(i, j) * x(i) * x(j);
    s += b(j, j) * x(j) * x(j);
  }
  return s;
}

SymMat Congruence(const SymMat& m, const Eigen::MatrixXd& p) {
  if (p.rows() != m.n()) {
    throw std::invalid_argument("Congruence: dimension mismatch");
  }
  const Eigen::MatrixXd r = p.transpose() * m.ToDense() * p;
  return SymMat::FromDense(0.5 * (r + r.transpose()));
}

bool PackedLess(const SymMat& a, const SymMat& b) {
  if (a.n() != b.n()) return a.n() < b.n();
  return std::lexicographical_compare(a.packed().begin(), a.packed().end(),
                                      b.packed().begin(), b.packed().end());
}

Eigen::MatrixXd RangeBasis(const Eigen::MatrixXd& v, double flush) {
  const Eigen::Index n = v.rows();
  const Eigen::Index r = v.cols();
  Eigen::MatrixXd rows = v.transpose();
  // Entries that will be flushed must not serve as pivots.
  const double pivot_tol = std::max(1e-9, flush) * std::max(1.0, v.cwiseAbs().maxCoeff());
  Eigen::Index lead = 0;
  for (Eigen::Index k = 0; k < r && lead < n; ++k) {
    Eigen::Index piv = k;
    while (lead < n) {
      rows.col(lead).tail(r - k).cwiseAbs().maxCoeff(&piv);
      piv += k;
      if (std::abs(rows(piv, lead)) > pivot_tol) break;
      ++lead;
    }
    if (lead == n) break;
    rows.row(k).swap(rows.row(piv));
    rows.row(k) /= rows(k, lead);
    for (Eigen::Index i = 0; i < r; ++i) {
      if (i != k) rows.row(i) -= rows(i, lead) * rows.row(k);
    }
    ++lead;
  }
  for (Eigen::Index i = 0; i < rows.size(); ++i) {
    if (std::abs(rows.data()[i]) < flush) rows.data()[i] = 0.0;
  }
  Eigen::MatrixXd basis(n, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    Eigen::VectorXd col = rows.row(k).transpose();
    for (Eigen::Index j = 0; j < k; ++j) col -= basis.col(j).dot(col) * basis.col(j);
    const double nc = col.norm();
    if (!(nc > 1e-12)) {
      throw std::invalid_argument("RangeBasis: columns are not independent");
    }
    basis.col(k) = col / nc;
  }
  return basis;
}

}  // namespace exactsdp
