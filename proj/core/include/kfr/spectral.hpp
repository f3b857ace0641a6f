#pragma once

// Multiplication-operator form of a symmetric W in finite dimension.
//
// Eigenvalues are grouped into clusters (lambda_k, m_k). Level n = 1..N,
// N = max m_k, collects the n-th eigenvector of every cluster with m_k >= n;
// its span H_n carries the atomic measure mu_n with a unit atom at each such
// lambda_k. In the block coordinates T_n = B_n^T, W acts as multiplication
// by lambda. The W-space counterpart H_n^W = |W|^{-1/2} H_n (same span, as
// H_n is W-invariant) carries the weighted measure |lambda| mu_n, and
// F_n = diag(1/sqrt|lambda_k|) maps L^2(mu_n) isometrically onto it.

#include <string>
#include <vector>

#include "kfr/fusion.hpp"
#include "kfr/krein.hpp"

namespace kfr {

inline constexpr double kDefaultClusterTol = 1e-8;

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;  // ascending, pairwise distinct locations
};

struct EigenCluster {
  double eigenvalue = 0.0;  // mean of the grouped eigenvalues
  std::size_t multiplicity = 0;
  Matrix eigenvectors;      // d x multiplicity, orthonormal
};

struct SpectralBlock {
  Matrix basis;           // d x r_n, orthonormal; column j pairs with measure.atoms[j]
  AtomicMeasure measure;  // mu_n
  Matrix coordinate_map;  // T_n = basis^T (r_n x d)
  std::vector<std::size_t> clusters;  // indices into SpectralRepresentation::clusters
};

struct SpectralRepresentation {
  std::vector<EigenCluster> clusters;  // ascending eigenvalue
  std::size_t max_multiplicity = 0;    // N
  std::vector<SpectralBlock> blocks;   // n = 1..N
  std::vector<std::string> warnings;

  std::size_t dim() const;
};

/// Groups eigenvalues whose consecutive gap is <= cluster_tol times the
/// spectral diameter. A gap within a factor 10 of that threshold (on either
/// side) is reported in `warnings`.
SpectralRepresentation spectral_representation(const GramOperator& g, double cluster_tol = kDefaultClusterTol);

/// {1, H_n}: an orthonormal basis of subspaces of (H, <.,.>).
WeightedSubspaceFamily ortho_basis_of_subspaces(const SpectralRepresentation& rep);

struct KreinBlock {
  Matrix basis;                   // orthonormal basis of |W|^{-1/2} H_n
  AtomicMeasure weighted_measure; // masses |lambda_k|
  Vector scaling;                 // diagonal of F_n, 1 / sqrt|lambda_k|
  /// max |(B_n F_n)^T |W| (B_n F_n) - I|: F_n is an isometry from
  /// L^2(mu_n) block coordinates into ||.||_J.
  double isometry_residual = 0.0;
};

struct KreinDecomposition {
  std::vector<KreinBlock> blocks;
};

KreinDecomposition krein_decomposition(const GramOperator& g, const SpectralRepresentation& rep);

/// ||T_n W T_n^T - diag(lambda)||_F for block n.
double multiplication_form_residual(const GramOperator& g, const SpectralRepresentation& rep, std::size_t n);

/// ||(I - P_n) W P_n||_F for the orthogonal projection P_n onto block n.
double invariance_residual(const GramOperator& g, const SpectralRepresentation& rep, std::size_t n);

}  // namespace kfr
