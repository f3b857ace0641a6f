#pragma once

// Frames of subspaces (fusion frames): weighted families {x_i, V_i}, their
// frame operators under an arbitrary metric, optimal frame bounds and the
// frame / tight / Parseval taxonomy.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kfr/krein.hpp"
#include "kfr/linalg.hpp"
#include "kfr/subspaces.hpp"

namespace kfr {

class WeightedSubspaceFamily {
 public:
  /// Throws Validation for an empty family, non-positive or non-finite
  /// weights, zero subspaces, or mixed ambient dimensions.
  WeightedSubspaceFamily(std::vector<double> weights, std::vector<Subspace> subspaces);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t ambient_dim() const noexcept { return subspaces_.front().ambient_dim(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }
  double max_weight() const;

  /// Same weights, subspaces replaced by their images under `a`.
  WeightedSubspaceFamily mapped(const Matrix& a) const;

 private:
  std::vector<double> weights_;
  std::vector<Subspace> subspaces_;
};

/// Which norm measures k and its projections, and which projection is used.
struct FrameSetting {
  SymmetricMatrix metric;
  ProjectionKind kind = ProjectionKind::Orthogonal;
  const GramOperator* gram = nullptr;  // required for JOrthogonal

  /// (H, <.,.>) with orthogonal projections.
  static FrameSetting hilbert(std::size_t d);
  /// The Krein definition: ||.||_J norm with J-orthogonal projections Q_V.
  static FrameSetting krein(const GramOperator& g);
  /// The Hilbert space (H, [.,.]_J) with its orthogonal projections P_V.
  static FrameSetting j_hilbert(const GramOperator& g);
};

struct FrameTolerances {
  double frame = 1e-10;
  double tight = 1e-8;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool is_frame = false;
  bool is_tight = false;
  bool is_parseval = false;
};

FrameBounds classify_bounds(double lower, double upper, const FrameTolerances& tol = {});

/// Projection matrix of every member under the setting.
std::vector<Matrix> member_projections(const WeightedSubspaceFamily& f, const FrameSetting& s);

/// M = sum_i x_i^2 Pi_i^T G Pi_i, so k^T M k = sum_i x_i^2 ||Pi_i k||_G^2.
/// The sum runs in index order.
SymmetricMatrix frame_operator(const WeightedSubspaceFamily& f, const FrameSetting& s);

/// Optimal bounds: the extremes of k^T M k / k^T G k.
FrameBounds frame_bounds(const WeightedSubspaceFamily& f, const FrameSetting& s,
                         const FrameTolerances& tol = {});

/// |a - b| <= rel_tol * max(|a|, |b|), with an absolute floor of
/// 1e-12 * scale so that two round-off zeros compare equal.
bool agree_relative(double a, double b, double rel_tol, double scale = 1.0);

struct FourWayReport {
  /// (i) {x_i, V_i} with Q, ||.||_J; (ii) {x_i, JV_i} with Q, ||.||_J;
  /// (iii) {x_i, V_i} with P in (H, [.,.]_J); (iv) {x_i, JV_i} with P.
  /// (i)/(ii) are empty when some V_i is degenerate.
  std::array<std::optional<FrameBounds>, 4> bounds;
  std::vector<std::string> degenerate_items;
  bool i_ii_agree = false;
  bool iii_iv_agree = false;
  bool i_iii_agree = false;
  /// Frame property (not the bounds) agrees across all four.
  bool is_frame_agrees = false;
  /// All four bound pairs agree to the relative tolerance.
  bool theorem_holds = false;
  double max_relative_gap = 0.0;
};

FourWayReport verify_four_way_equivalence(const WeightedSubspaceFamily& f, const GramOperator& g,
                                          double rel_tol = 1e-8, const FrameTolerances& tol = {});

/// Bounds of the vector frame {f_j}: extremes of sum_j <k, f_j>_G^2 / ||k||_G^2.
FrameBounds vector_frame_bounds(std::span<const Vector> vectors, const SymmetricMatrix& metric,
                                const FrameTolerances& tol = {});

struct LocalFrameSystem {
  std::vector<std::vector<Vector>> blocks;
  std::vector<double> weights;
  /// Optional subspaces each block is expected to span.
  std::vector<Subspace> recorded;
};

struct LocalFrameReport {
  /// Bounds of each block as a frame for its own span in ||.||_J.
  std::vector<std::pair<double, double>> block_bounds;
  FrameBounds weighted_vectors;      // {x_i k_ij}
  FrameBounds weighted_orthonormal;  // {x_i e_ij}, e_ij a [.,.]_J-orthonormal basis of V_i
  FrameBounds fusion;                // {x_i, V_i} in the Krein sense
  /// Blocks whose span differs from the recorded subspace.
  std::vector<std::size_t> mismatched_blocks;
  bool verdicts_agree = false;
};

/// Throws Validation when a block is empty or has a zero local lower bound.
LocalFrameReport local_frames_to_fusion(const LocalFrameSystem& system, const GramOperator& g,
                                        const FrameTolerances& tol = {});

struct TransportResult {
  WeightedSubspaceFamily family;
  /// U^T G_dst U = G_src to 1e-9 (relative), i.e. U is unitary between
  /// the two metrics and optimal bounds are preserved.
  bool metric_unitary = false;
};

/// {x_i, U V_i}. Throws Singular when cond(U) > 1e10.
TransportResult transport_by_invertible(const WeightedSubspaceFamily& f, const Matrix& u,
                                        const SymmetricMatrix& g_src, const SymmetricMatrix& g_dst);

}  // namespace kfr
