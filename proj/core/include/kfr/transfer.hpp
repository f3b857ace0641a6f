#pragma once

// Moving frames of subspaces between (H, <.,.>) and the W-space: the regular
// case with its certified bound interval, the metric-unitary transfer maps
// |W|^{-1/2} and |W|^{1/2}, and the breakdown of the lower Krein bound
// along a family W(eps) with min |eigenvalue| -> 0.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kfr/fusion.hpp"
#include "kfr/krein.hpp"

namespace kfr {

inline constexpr double kSandwichSlack = 1e-9;
/// Smallest min|lambda| / max|lambda| accepted by the transfer maps and sweeps.
inline constexpr double kMachineFloor = 1e-12;

struct TransferReport {
  FrameBounds hilbert_bounds;  // G = I, orthogonal projections
  FrameBounds krein_bounds;    // G = |W|, J-orthogonal projections
  /// (A / (||W^{-1}|| ||W||), B ||W|| ||W^{-1}||), bounds stated in ||.||_J.
  double certified_low = 0.0;
  double certified_high = 0.0;
  /// The constants A ||W^{-1}||^{-1} and B ||W|| as they appear in the
  /// regular transfer argument (they compare against ||k||^2, not ||k||_J^2).
  double unnormalized_low = 0.0;
  double unnormalized_high = 0.0;
  bool sandwich_holds = false;
};

/// Throws Regularity for a NearSingular Gram operator.
TransferReport transfer_regular(const WeightedSubspaceFamily& f, const GramOperator& g,
                                const FrameTolerances& tol = {});

/// {x_i, |W|^{-1/2} V_i}: from (H, <.,.>) into the W-space. Throws Regularity
/// when min|lambda| / max|lambda| < kMachineFloor.
WeightedSubspaceFamily transfer_map_hilbert_to_krein(const WeightedSubspaceFamily& f, const GramOperator& g);
/// {x_i, |W|^{1/2} V_i}: back to (H, <.,.>).
WeightedSubspaceFamily transfer_map_krein_to_hilbert(const WeightedSubspaceFamily& f, const GramOperator& g);

struct TransferPreservation {
  FrameBounds source_hilbert;        // F under (I, orthogonal)
  FrameBounds image_krein;           // U F under (|W|, J-orthogonal)
  FrameBounds image_j_hilbert;       // U F under (|W|, [.,.]_J-orthogonal)
  FrameBounds source_krein;          // F under (|W|, J-orthogonal)
  FrameBounds preimage_hilbert;      // U^{-1} F under (I, orthogonal)
  FrameBounds source_j_hilbert;      // F under (|W|, [.,.]_J-orthogonal)
  bool forward_krein_preserved = false;     // source_hilbert == image_krein
  bool forward_j_hilbert_preserved = false; // source_hilbert == image_j_hilbert
  bool backward_krein_preserved = false;    // source_krein == preimage_hilbert
  bool backward_j_hilbert_preserved = false;// source_j_hilbert == preimage_hilbert
  /// krein_to_hilbert(hilbert_to_krein(F)) has the spans of F to 1e-9.
  bool round_trip_identity = false;
  double max_relative_gap = 0.0;
};

/// Bound preservation of both transfer maps, measured both with J-orthogonal
/// and with [.,.]_J-orthogonal projections on the W-space side.
TransferPreservation check_transfer_preservation(const WeightedSubspaceFamily& f, const GramOperator& g,
                                                 double rel_tol = 1e-8, const FrameTolerances& tol = {});

using GramFamily = std::function<GramOperator(double)>;

/// W(eps) = diag(1, ..., 1, eps).
GramFamily diagonal_family(std::size_t d);
/// W with its smallest-|lambda| eigenvalue replaced by sign(lambda) * eps * max|lambda|.
GramFamily deflated_family(const SymmetricMatrix& w);

struct SweepPoint {
  double epsilon = 0.0;
  std::optional<FrameBounds> krein_bounds;  // empty when skipped
  double condition_number = 0.0;            // of W(eps)
  /// Upper / lower end of the certified interval: (B / A) * cond(W)^2.
  double certified_ratio = 0.0;
  bool envelope_holds = false;              // lower <= C eps + 1e-12
  std::string skipped_reason;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // strictly decreasing epsilon
  FrameBounds hilbert_bounds;
  double max_weight = 0.0;
  /// C = B M^2 / A from the Hilbert bounds and the largest weight.
  double envelope_constant = 0.0;
  double fitted_slope = 0.0;       // least squares of log lower vs log eps
  std::size_t fitted_points = 0;
  bool slope_in_range = false;     // fitted_slope in [0.9, 1.1]
  bool envelope_holds = false;     // at every evaluated point
  bool monotone_degradation = false;
  bool theorem_holds = false;      // slope_in_range && envelope_holds

  std::vector<double> epsilons() const;
  std::vector<double> lower_bounds() const;  // NaN for skipped points
};

inline const std::vector<double> kDefaultSweepEpsilons = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

/// Optimal lower Krein bound of a fixed family along W(eps). Epsilons are
/// evaluated concurrently and reported in decreasing order. Requires at least
/// four distinct epsilons spanning three decades, all >= kMachineFloor, and a
/// family that is a frame for (H, <.,.>). Degenerate (F, eps) pairs are
/// skipped and reported.
SweepResult singular_sweep(const WeightedSubspaceFamily& f, const GramFamily& family,
                           std::vector<double> epsilons, const FrameTolerances& tol = {});

}  // namespace kfr
