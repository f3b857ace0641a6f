#include "kfr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kfr/errors.hpp"

namespace kfr {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::Dimension, "dot product of vectors with different lengths");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorKind::Dimension, "ragged matrix rows");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  if (columns.empty()) return {};
  const std::size_t d = columns.front().size();
  Matrix m(d, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != d) throw Error(ErrorKind::Dimension, "columns differ in length");
    m.set_column(j, columns[j]);
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
  if (values.size() != rows_) throw Error(ErrorKind::Dimension, "column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::columns(std::size_t first, std::size_t count) const {
  Matrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
  return m;
}

Matrix Matrix::hstack(const Matrix& left, const Matrix& right) {
  if (left.cols() == 0) return right;
  if (right.cols() == 0) return left;
  if (left.rows() != right.rows()) throw Error(ErrorKind::Dimension, "hstack row mismatch");
  Matrix m(left.rows(), left.cols() + right.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < left.cols(); ++j) m(i, j) = left(i, j);
    for (std::size_t j = 0; j < right.cols(); ++j) m(i, left.cols() + j) = right(i, j);
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorKind::Dimension, "matrix sum of different shapes");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorKind::Dimension, "matrix difference of different shapes");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::Dimension, "matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::Dimension, "matrix-vector shape mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s = std::max(s, std::abs(v));
  return s;
}

double orthonormality_defect(const Matrix& columns) {
  return frobenius_norm(columns.transposed() * columns - Matrix::identity(columns.cols()));
}

SymmetricMatrix::SymmetricMatrix(Matrix m) : m_(std::move(m)) {
  if (!m_.square()) throw Error(ErrorKind::Dimension, "symmetric matrix must be square");
  if (!m_.all_finite()) throw Error(ErrorKind::Validation, "matrix has non-finite entries");
  const std::size_t n = m_.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      asymmetry_ = std::max(asymmetry_, std::abs(m_(i, j) - m_(j, i)));
      const double avg = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  return SymmetricMatrix(Matrix::identity(n));
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> entries) {
  return SymmetricMatrix(Matrix::diagonal(entries));
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// A <- P^T A P and V <- V P for the plane rotation in (p, q) that zeroes a_pq.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition symmetric_eig(const SymmetricMatrix& m) {
  const std::size_t n = m.dim();
  Matrix a = m.matrix();
  Matrix v = Matrix::identity(n);
  const double scale = frobenius_norm(a);

  EigenDecomposition out;
  if (scale > 0.0) {
    const double threshold = kJacobiOffDiagonalTol * scale;
    double off = off_diagonal_norm(a);
    while (off > threshold) {
      if (out.sweeps == kJacobiMaxSweeps) {
        std::ostringstream msg;
        msg << "Jacobi eigensolver did not converge in " << kJacobiMaxSweeps
            << " sweeps (off-diagonal residual " << off << ")";
        throw Error(ErrorKind::NonConvergence, msg.str(), off);
      }
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q)
          if (a(p, q) != 0.0) jacobi_rotate(a, v, p, q);
      ++out.sweeps;
      off = off_diagonal_norm(a);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    // Sign convention: the largest-magnitude component (first on ties) is positive.
    std::size_t lead = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(lead, src))) lead = i;
    const double sign = v(lead, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

SymmetricMatrix reconstruct(const EigenDecomposition& eig) {
  return matrix_function(eig, [](double x) { return x; });
}

Matrix orthonormalize(const Matrix& columns, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::Validation, "orthonormalize tolerance must be positive");
  const std::size_t d = columns.rows();
  double largest = 0.0;
  for (std::size_t j = 0; j < columns.cols(); ++j) largest = std::max(largest, norm2(columns.column(j)));

  std::vector<Vector> kept;
  if (largest == 0.0) return Matrix(d, 0);
  for (std::size_t j = 0; j < columns.cols(); ++j) {
    Vector w = columns.column(j);
    // Two Gram-Schmidt passes keep the result orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : kept) {
        const double c = dot(q, w);
        for (std::size_t i = 0; i < d; ++i) w[i] -= c * q[i];
      }
    const double r = norm2(w);
    if (r <= tol * largest) continue;
    for (double& x : w) x /= r;
    kept.push_back(std::move(w));
  }
  if (kept.empty()) return Matrix(d, 0);
  return Matrix::from_columns(kept);
}

SymmetricMatrix matrix_function(const EigenDecomposition& eig, const ScalarMap& f) {
  const std::size_t n = eig.values.size();
  Vector fv(n);
  for (std::size_t k = 0; k < n; ++k) {
    fv[k] = f(eig.values[k]);
    if (!std::isfinite(fv[k])) {
      std::ostringstream msg;
      msg << "matrix function undefined at eigenvalue " << eig.values[k];
      throw Error(ErrorKind::Domain, msg.str(), eig.values[k]);
    }
  }
  Matrix r(n, n);
  const Matrix& v = eig.vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(i, k) * fv[k] * v(j, k);
      r(i, j) = s;
      r(j, i) = s;
    }
  return SymmetricMatrix(std::move(r));
}

SymmetricMatrix matrix_function(const SymmetricMatrix& m, const ScalarMap& f) {
  return matrix_function(symmetric_eig(m), f);
}

RayleighExtremes extremal_rayleigh(const SymmetricMatrix& m, const SymmetricMatrix& g) {
  if (m.dim() != g.dim()) throw Error(ErrorKind::Dimension, "pencil matrices differ in size");
  const EigenDecomposition geig = symmetric_eig(g);
  const double gmax = geig.values.back();
  const double gmin = geig.values.front();
  if (!(gmax > 0.0) || !(gmin > 1e-12 * gmax)) {
    std::ostringstream msg;
    msg << "metric is not positive definite (eigenvalue range [" << gmin << ", " << gmax << "])";
    throw Error(ErrorKind::Metric, msg.str(), gmin);
  }
  const SymmetricMatrix g_inv_sqrt = matrix_function(geig, [](double x) { return 1.0 / std::sqrt(x); });
  const Matrix& w = g_inv_sqrt.matrix();
  const EigenDecomposition ceig = symmetric_eig(SymmetricMatrix(w * m.matrix() * w));

  RayleighExtremes out;
  out.min = ceig.values.front();
  out.max = ceig.values.back();
  out.argmin = w * ceig.vectors.column(0);
  out.argmax = w * ceig.vectors.column(m.dim() - 1);
  return out;
}

SymmetricInverse symmetric_inverse(const SymmetricMatrix& m) {
  const EigenDecomposition eig = symmetric_eig(m);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : eig.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (lo == 0.0) throw Error(ErrorKind::Singular, "symmetric matrix is exactly singular", 0.0);
  return {matrix_function(eig, [](double x) { return 1.0 / x; }), hi / lo};
}

Vector singular_values(const Matrix& a) {
  // One-sided (Hestenes) Jacobi: rotate column pairs until mutually
  // orthogonal; the column norms are then the singular values.
  Matrix u = a;
  const std::size_t m = u.rows();
  const std::size_t n = u.cols();
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double up = u(i, p);
          const double uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    if (!rotated) break;
  }
  Vector sv(n);
  for (std::size_t j = 0; j < n; ++j) sv[j] = norm2(u.column(j));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double condition_number(const Matrix& a) {
  if (!a.square()) throw Error(ErrorKind::Dimension, "condition number of a non-square matrix");
  const Vector sv = singular_values(a);
  if (sv.empty()) return 1.0;
  if (sv.back() == 0.0) return std::numeric_limits<double>::infinity();
  return sv.front() / sv.back();
}

}  // namespace kfr
