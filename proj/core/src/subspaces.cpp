#include "kfr/subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kfr/errors.hpp"

namespace kfr {

Subspace Subspace::span(const Matrix& columns, double tol) {
  return Subspace(orthonormalize(columns, tol));
}

Subspace Subspace::span(std::span<const Vector> columns, double tol) {
  return span(Matrix::from_columns(columns), tol);
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  if (!basis.all_finite()) throw Error(ErrorKind::Validation, "subspace basis has non-finite entries");
  if (basis.cols() > basis.rows()) throw Error(ErrorKind::Validation, "more basis vectors than dimensions");
  const double defect = orthonormality_defect(basis);
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "basis is not orthonormal (||B^T B - I||_F = " << defect << ")";
    throw Error(ErrorKind::Validation, msg.str(), defect);
  }
  return Subspace(std::move(basis));
}

Subspace Subspace::whole(std::size_t d) { return Subspace(Matrix::identity(d)); }

Subspace Subspace::zero(std::size_t d) { return Subspace(Matrix(d, 0)); }

Subspace Subspace::image(const Matrix& a) const {
  if (empty()) return zero(a.rows());
  return span(a * basis_);
}

namespace {

double max_residual_outside(const Matrix& vectors, const Matrix& basis) {
  double worst = 0.0;
  const Matrix bt = basis.transposed();
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    const Vector v = vectors.column(j);
    Vector r = v;
    if (basis.cols() > 0) {
      const Vector c = bt * v;
      const Vector p = basis * c;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p[i];
    }
    worst = std::max(worst, norm2(r));
  }
  return worst;
}

// (B^T W B)^{-1} with the degeneracy check.
SymmetricMatrix compressed_inverse(const Subspace& v, const GramOperator& g) {
  const Matrix& b = v.basis();
  const SymmetricMatrix c(b.transposed() * g.w().matrix() * b);
  const EigenDecomposition eig = symmetric_eig(c);
  double lo = std::abs(eig.values.front());
  double hi = 0.0;
  for (double x : eig.values) {
    lo = std::min(lo, std::abs(x));
    hi = std::max(hi, std::abs(x));
  }
  if (hi == 0.0 || lo * kDegeneracyConditionCap < hi) {
    std::ostringstream msg;
    msg << "subspace is degenerate under the W-metric (cond(B^T W B) = "
        << (lo == 0.0 ? INFINITY : hi / lo) << " exceeds " << kDegeneracyConditionCap
        << "); it is not projectively complete";
    throw Error(ErrorKind::Degeneracy, msg.str(), lo == 0.0 ? INFINITY : hi / lo);
  }
  return matrix_function(eig, [](double x) { return 1.0 / x; });
}

void require_same_dim(const Subspace& v, std::size_t d) {
  if (v.ambient_dim() != d) throw Error(ErrorKind::Dimension, "subspace and operator dimensions differ");
  if (v.empty()) throw Error(ErrorKind::Validation, "projection onto the zero subspace");
}

}  // namespace

bool same_span(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) return false;
  return max_residual_outside(a.basis(), b.basis()) <= tol &&
         max_residual_outside(b.basis(), a.basis()) <= tol;
}

Projection orthogonal_projection(const Subspace& v, const SymmetricMatrix& metric) {
  require_same_dim(v, metric.dim());
  const Matrix& b = v.basis();
  const Matrix btg = b.transposed() * metric.matrix();
  const SymmetricInverse inv = symmetric_inverse(SymmetricMatrix(btg * b));
  if (inv.condition > kDegeneracyConditionCap) {
    throw Error(ErrorKind::Degeneracy, "B^T G B is numerically singular; metric is not positive definite on V",
                inv.condition);
  }
  return {b * inv.inverse.matrix() * btg, ProjectionKind::Orthogonal};
}

Projection j_orthogonal_projection_gram(const Subspace& v, const GramOperator& g) {
  require_same_dim(v, g.dim());
  const Matrix& b = v.basis();
  const SymmetricMatrix inv = compressed_inverse(v, g);
  return {b * inv.matrix() * (b.transposed() * g.w().matrix()), ProjectionKind::JOrthogonal};
}

Matrix compose_metric_projections(const Subspace& v, const GramOperator& g) {
  require_same_dim(v, g.dim());
  const Subspace jv = v.image(g.j().matrix());
  return orthogonal_projection(v, g.abs()).matrix * orthogonal_projection(jv, g.abs()).matrix;
}

double projection_defect(const Matrix& p, const Matrix& metric) {
  const double scale = std::max(1.0, frobenius_norm(p));
  const double idem = frobenius_norm(p * p - p) / scale;
  const double adj = frobenius_norm(metric * p - p.transposed() * metric) /
                     (scale * std::max(1.0, frobenius_norm(metric)));
  return std::max(idem, adj);
}

Projection j_orthogonal_projection_composed(const Subspace& v, const GramOperator& g) {
  compressed_inverse(v, g);  // same degeneracy contract as the Gram construction
  Matrix q = compose_metric_projections(v, g);
  const double defect = projection_defect(q, g.w().matrix());
  if (defect > 1e-9) {
    std::ostringstream msg;
    msg << "P_V P_JV is not a J-orthogonal projection for this subspace (defect " << defect
        << "); JV is not contained in V";
    throw Error(ErrorKind::Invariant, msg.str(), defect);
  }
  return {std::move(q), ProjectionKind::JOrthogonal};
}

Subspace j_orthogonal_complement(const Subspace& v, const GramOperator& g) {
  const std::size_t d = g.dim();
  if (v.ambient_dim() != d) throw Error(ErrorKind::Dimension, "subspace and operator dimensions differ");
  if (v.empty()) return Subspace::whole(d);
  // [.,.]_J-complement of V is the Euclidean complement of |W| V.
  const Matrix abs_b = orthonormalize(g.abs().matrix() * v.basis());
  const Matrix completed = orthonormalize(Matrix::hstack(abs_b, Matrix::identity(d)));
  const std::size_t r = abs_b.cols();
  if (completed.cols() == r) return Subspace::zero(d);
  const Matrix perp_j = completed.columns(r, completed.cols() - r);
  return Subspace::span(g.j().matrix() * perp_j);
}

Completeness is_projectively_complete(const Subspace& v, const GramOperator& g, double tol) {
  require_same_dim(v, g.dim());
  const Matrix& b = v.basis();
  const EigenDecomposition eig = symmetric_eig(SymmetricMatrix(b.transposed() * g.w().matrix() * b));
  std::size_t small = 0;
  double hi = 0.0;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (std::abs(eig.values[k]) < std::abs(eig.values[small])) small = k;
    hi = std::max(hi, std::abs(eig.values[k]));
  }
  Completeness out;
  out.ratio = hi == 0.0 ? 0.0 : std::abs(eig.values[small]) / hi;
  out.complete = hi > 0.0 && out.ratio > tol;
  if (!out.complete) {
    Vector w = b * eig.vectors.column(small);
    const double n = norm2(w);
    for (double& x : w) x /= n;
    out.witness = std::move(w);
  }
  return out;
}

bool check_j_orthonormal(std::span<const Vector> vectors, const GramOperator& g, double tol) {
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i; j < vectors.size(); ++j) {
      const double v = w_inner(g, vectors[i], vectors[j]);
      if (i == j ? std::abs(std::abs(v) - 1.0) > tol : std::abs(v) > tol) return false;
    }
  return true;
}

}  // namespace kfr
