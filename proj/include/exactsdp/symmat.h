#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace exactsdp {

/// Default relative tolerance for PSD membership tests.
inline constexpr double kDefaultPsdTol = 1e-9;

/// Dense real symmetric matrix stored as a packed upper triangle.
///
/// Entry (i, j) with i <= j lives at index i + j(j+1)/2 (column-major packed
/// upper, as in LAPACK 'U' storage). Off-diagonal entries are stored
/// unscaled; use svec() for the sqrt(2)-scaled isometric vectorization.
class SymMat {
 public:
  SymMat() = default;
  /// Zero matrix of order n.
  explicit SymMat(int n);

  static SymMat Identity(int n);
  static SymMat Diagonal(std::span<const double> d);
  static SymMat Diagonal(std::initializer_list<double> d);
  /// Takes the upper triangle of `m`; throws if `m` is not square or is
  /// asymmetric by more than `sym_tol` (absolute).
  static SymMat FromDense(const Eigen::MatrixXd& m, double sym_tol = 0.0);
  /// Row-major nested initializer, e.g. FromRows({{2, 1}, {1, 1}}).
  static SymMat FromRows(std::initializer_list<std::initializer_list<double>> rows);
  static SymMat FromPacked(int n, std::vector<double> packed);
  /// Inverse of svec().
  static SymMat Smat(int n, const Eigen::VectorXd& v);

  int n() const { return n_; }
  double operator()(int i, int j) const { return data_[Index(i, j)]; }
  void Set(int i, int j, double v) { data_[Index(i, j)] = v; }
  void Add(int i, int j, double v) { data_[Index(i, j)] += v; }

  const std::vector<double>& packed() const { return data_; }
  Eigen::MatrixXd ToDense() const;
  /// The packed upper triangle as a vector (column by column).
  Eigen::VectorXd Svec() const;

  double FrobeniusNorm() const;
  double Trace() const;
  bool IsZero() const;
  bool AllFinite() const;

  SymMat& operator+=(const SymMat& other);
  SymMat& operator-=(const SymMat& other);
  SymMat& operator*=(double s);
  SymMat operator-() const;

  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(SymMat a, double s) { return a *= s; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }
  friend SymMat operator/(SymMat a, double s) { return a *= 1.0 / s; }
  friend bool operator==(const SymMat& a, const SymMat& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  static std::size_t Index(int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(j) * (j + 1) / 2;
  }

  int n_ = 0;
  std::vector<double> data_;
};

struct EigDecomp {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column k pairs with values(k)
};

/// trace(a b). Throws std::invalid_argument on dimension mismatch.
double Inner(const SymMat& a, const SymMat& b);

/// Cyclic Jacobi eigendecomposition. Throws std::invalid_argument if any
/// entry is non-finite.
EigDecomp EigSym(const SymMat& x);
/// Same algorithm on a dense symmetric matrix (upper triangle is read).
EigDecomp EigSym(const Eigen::MatrixXd& x);

double LambdaMin(const SymMat& x);
double LambdaMax(const SymMat& x);

/// lambda_min(x) >= -tol * max(1, ||x||_F).
bool IsPsd(const SymMat& x, double tol = kDefaultPsdTol);

/// x x^T. Throws on empty x.
SymMat Gram(const Eigen::VectorXd& x);

/// x^T b x.
double QuadraticForm(const SymMat& b, const Eigen::VectorXd& x);

/// p^T m p for a rectangular p (m.n() x k).
SymMat Congruence(const SymMat& m, const Eigen::MatrixXd& p);

/// Lexicographic comparison of packed representations (then by order).
bool PackedLess(const SymMat& a, const SymMat& b);

/// Orthonormal basis of range(v) in canonical form: reduced row echelon form
/// of v^T with entries below `flush` in magnitude set to zero, then
/// Gram-Schmidt in row order. v must have full column rank.
Eigen::MatrixXd RangeBasis(const Eigen::MatrixXd& v, double flush = 0.0);

}  // namespace exactsdp
