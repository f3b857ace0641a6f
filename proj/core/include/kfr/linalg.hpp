#pragma once

// Dense real linear algebra for small problems (d up to ~128): a row-major
// matrix, exactly-symmetric matrices, a cyclic Jacobi eigensolver, spectral
// matrix functions and extremal generalized Rayleigh quotients.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace kfr {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> entries);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);
  /// Columns [first, first + count).
  Matrix columns(std::size_t first, std::size_t count) const;
  /// Horizontal concatenation; row counts must agree.
  static Matrix hstack(const Matrix& left, const Matrix& right);

  Matrix transposed() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double frobenius_norm(const Matrix& m);
/// Largest absolute entry.
double max_abs(const Matrix& m);
/// ||V^T V - I||_F for a column block V.
double orthonormality_defect(const Matrix& columns);

/// A square matrix stored exactly symmetric. Construction averages the
/// off-diagonal pairs, so (i, j) and (j, i) are bit-identical afterwards.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Matrix m);

  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(std::span<const double> entries);

  std::size_t dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  /// Largest |m_ij - m_ji| of the matrix passed to the constructor.
  double asymmetry_before_averaging() const noexcept { return asymmetry_; }

 private:
  Matrix m_;
  double asymmetry_ = 0.0;
};

struct EigenDecomposition {
  Vector values;     // ascending
  Matrix vectors;    // column k pairs with values[k]
  int sweeps = 0;    // Jacobi sweeps used
};

inline constexpr double kJacobiOffDiagonalTol = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi eigendecomposition. Throws NonConvergence (with the final
/// off-diagonal Frobenius norm as residual) after kJacobiMaxSweeps sweeps.
EigenDecomposition symmetric_eig(const SymmetricMatrix& m);

/// Rebuilds V diag(values) V^T.
SymmetricMatrix reconstruct(const EigenDecomposition& eig);

inline constexpr double kDefaultRankTol = 1e-10;

/// Orthonormal basis of the column span, keeping the input column order.
/// A column is dropped when its residual after projecting out the previous
/// ones is <= tol * (largest input column norm). All-zero input gives a
/// d x 0 result.
Matrix orthonormalize(const Matrix& columns, double tol = kDefaultRankTol);

using ScalarMap = std::function<double(double)>;

/// V diag(f(lambda)) V^T. Throws Domain naming the eigenvalue when f is not
/// finite there.
SymmetricMatrix matrix_function(const EigenDecomposition& eig, const ScalarMap& f);
SymmetricMatrix matrix_function(const SymmetricMatrix& m, const ScalarMap& f);

struct RayleighExtremes {
  double min = 0.0;
  double max = 0.0;
  Vector argmin;  // x attaining min of x^T M x / x^T G x
  Vector argmax;
};

/// Extreme eigenvalues of the pencil (M, G) for symmetric positive definite G,
/// via the congruence G^{-1/2} M G^{-1/2}. Throws Metric if the smallest
/// eigenvalue of G is not above 1e-12 times the largest.
RayleighExtremes extremal_rayleigh(const SymmetricMatrix& m, const SymmetricMatrix& g);

/// Inverse of a symmetric matrix through its eigendecomposition, together
/// with the 2-norm condition number max|lambda| / min|lambda|.
struct SymmetricInverse {
  SymmetricMatrix inverse;
  double condition = 0.0;
};
SymmetricInverse symmetric_inverse(const SymmetricMatrix& m);

/// Singular values in descending order (one-sided Jacobi).
Vector singular_values(const Matrix& a);

/// 2-norm condition number of a general square matrix.
double condition_number(const Matrix& a);

}  // namespace kfr
