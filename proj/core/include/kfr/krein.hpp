#pragma once

// A finite-dimensional Hilbert space carrying the indefinite W-metric
// [x, y] = <W x, y>, its polar decomposition W = J |W| and the positive
// J-inner product [x, y]_J = <|W| x, y>.

#include <span>

#include "kfr/linalg.hpp"

namespace kfr {

inline constexpr double kKernelTol = 1e-14;
inline constexpr double kDefaultEpsilonThreshold = 1e-6;

enum class Regularity { Regular, NearSingular };

struct RegularityReport {
  double min_abs_eigenvalue = 0.0;  // = 1 / ||W^{-1}||
  double max_abs_eigenvalue = 0.0;  // = ||W||
  double condition_number = 0.0;
  Regularity classification = Regularity::Regular;
  /// For NearSingular: the modelled epsilon, i.e. min_abs_eigenvalue.
  double epsilon = 0.0;
};

class GramOperator {
 public:
  /// Polar decomposition of W. Throws Kernel when some |lambda| is at most
  /// kKernelTol * max|lambda|. The operator is NearSingular when
  /// min|lambda| / max|lambda| < epsilon_threshold.
  static GramOperator build(const SymmetricMatrix& w,
                            double epsilon_threshold = kDefaultEpsilonThreshold);

  std::size_t dim() const noexcept { return w_.dim(); }
  const SymmetricMatrix& w() const noexcept { return w_; }
  const EigenDecomposition& eig() const noexcept { return eig_; }
  /// Fundamental symmetry sign(W).
  const SymmetricMatrix& j() const noexcept { return j_; }
  const SymmetricMatrix& abs() const noexcept { return abs_; }
  const SymmetricMatrix& sqrt_abs() const noexcept { return sqrt_abs_; }
  const SymmetricMatrix& inv_sqrt_abs() const noexcept { return inv_sqrt_abs_; }
  const RegularityReport& regularity() const noexcept { return regularity_; }
  bool is_regular() const noexcept { return regularity_.classification == Regularity::Regular; }

  double norm() const noexcept { return regularity_.max_abs_eigenvalue; }
  double inverse_norm() const noexcept { return 1.0 / regularity_.min_abs_eigenvalue; }

 private:
  GramOperator() = default;

  SymmetricMatrix w_;
  EigenDecomposition eig_;
  SymmetricMatrix j_;
  SymmetricMatrix abs_;
  SymmetricMatrix sqrt_abs_;
  SymmetricMatrix inv_sqrt_abs_;
  RegularityReport regularity_;
};

/// [x, y] = <W x, y>.
double w_inner(const GramOperator& g, std::span<const double> x, std::span<const double> y);
/// [x, y]_J = <|W| x, y>.
double j_inner(const GramOperator& g, std::span<const double> x, std::span<const double> y);
double j_norm(const GramOperator& g, std::span<const double> x);

struct NormEquivalence {
  double lower = 0.0;  // 1 / ||W^{-1}||
  double upper = 0.0;  // ||W||
};

/// Tight constants with lower ||x||^2 <= ||x||_J^2 <= upper ||x||^2.
NormEquivalence norm_equivalence_constants(const GramOperator& g);

}  // namespace kfr
