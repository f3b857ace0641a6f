#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kfr/krein.hpp"
#include "kfr/linalg.hpp"

namespace kfr {

/// Relative condition cap on B^T W B beyond which a subspace is treated as
/// degenerate (not projectively complete).
inline constexpr double kDegeneracyConditionCap = 1e10;
inline constexpr double kSubspaceEqualityTol = 1e-8;

/// A linear subspace stored as an orthonormal basis (standard inner product).
class Subspace {
 public:
  /// Span of the given columns, orthonormalized with rank tolerance `tol`.
  static Subspace span(const Matrix& columns, double tol = kDefaultRankTol);
  static Subspace span(std::span<const Vector> columns, double tol = kDefaultRankTol);
  /// Adopts an already orthonormal basis; throws Validation if B^T B != I
  /// to 1e-10.
  static Subspace from_orthonormal(Matrix basis);
  static Subspace whole(std::size_t d);
  static Subspace zero(std::size_t d);

  std::size_t ambient_dim() const noexcept { return basis_.rows(); }
  std::size_t dim() const noexcept { return basis_.cols(); }
  bool empty() const noexcept { return basis_.cols() == 0; }
  const Matrix& basis() const noexcept { return basis_; }

  /// Span of A * basis.
  Subspace image(const Matrix& a) const;

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// True when every basis vector of each subspace lies in the other up to a
/// residual of `tol`.
bool same_span(const Subspace& a, const Subspace& b, double tol = kSubspaceEqualityTol);

enum class ProjectionKind { Orthogonal, JOrthogonal };

struct Projection {
  Matrix matrix;
  ProjectionKind kind = ProjectionKind::Orthogonal;
};

/// Orthogonal projection onto V for the inner product <G x, y>:
/// P = B (B^T G B)^{-1} B^T G.
Projection orthogonal_projection(const Subspace& v, const SymmetricMatrix& metric);

/// J-orthogonal projection from the compressed Gram block:
/// Q = B (B^T W B)^{-1} B^T W. Throws Degeneracy when cond(B^T W B) exceeds
/// kDegeneracyConditionCap.
Projection j_orthogonal_projection_gram(const Subspace& v, const GramOperator& g);

/// The product P_V P_{JV} of the two [.,.]_J-orthogonal projections, without
/// any validity check.
Matrix compose_metric_projections(const Subspace& v, const GramOperator& g);

/// P_V P_{JV} returned as a J-orthogonal projection. The product is accepted
/// only when it is idempotent and W-self-adjoint to 1e-9 (relative to its
/// size); otherwise throws Invariant. That happens whenever JV is not
/// contained in V.
Projection j_orthogonal_projection_composed(const Subspace& v, const GramOperator& g);

/// V^[perp] = {u : [u, v] = 0 for all v in V}, computed as J applied to the
/// [.,.]_J-orthogonal complement of V.
Subspace j_orthogonal_complement(const Subspace& v, const GramOperator& g);

struct Completeness {
  bool complete = false;
  /// Smallest / largest singular value of B^T W B.
  double ratio = 0.0;
  /// Unit vector v in V minimizing |[v, v]| over the eigenvectors of B^T W B;
  /// set when not complete.
  std::optional<Vector> witness;
};

Completeness is_projectively_complete(const Subspace& v, const GramOperator& g,
                                      double tol = 1.0 / kDegeneracyConditionCap);

/// [e_i, e_j] = +-delta_ij within tol.
bool check_j_orthonormal(std::span<const Vector> vectors, const GramOperator& g, double tol);

/// Max of ||P^2 - P|| and ||G P - P^T G|| (Frobenius, relative to max(1, ||P||)).
double projection_defect(const Matrix& p, const Matrix& metric);

}  // namespace kfr
