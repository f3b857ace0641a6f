#include "kfr/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "kfr/errors.hpp"

namespace kfr {

namespace {

void require_above_floor(const GramOperator& g) {
  const RegularityReport& r = g.regularity();
  if (r.min_abs_eigenvalue / r.max_abs_eigenvalue < kMachineFloor) {
    std::ostringstream msg;
    msg << "Gram operator is below the machine floor (min/max |eigenvalue| = "
        << r.min_abs_eigenvalue / r.max_abs_eigenvalue << " < " << kMachineFloor << ")";
    throw Error(ErrorKind::Regularity, msg.str(), r.min_abs_eigenvalue);
  }
}

double relative_gap(double a, double b) {
  const double gap = std::abs(a - b);
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : gap / scale;
}

bool bounds_agree(const FrameBounds& a, const FrameBounds& b, double rel_tol, double& worst) {
  const double scale = std::max(a.upper, b.upper);
  const bool ok = agree_relative(a.lower, b.lower, rel_tol, scale) && agree_relative(a.upper, b.upper, rel_tol, scale);
  if (std::abs(a.lower - b.lower) > 1e-12 * scale) worst = std::max(worst, relative_gap(a.lower, b.lower));
  if (std::abs(a.upper - b.upper) > 1e-12 * scale) worst = std::max(worst, relative_gap(a.upper, b.upper));
  return ok;
}

}  // namespace

TransferReport transfer_regular(const WeightedSubspaceFamily& f, const GramOperator& g, const FrameTolerances& tol) {
  if (!g.is_regular()) {
    throw Error(ErrorKind::Regularity,
                "transfer_regular needs a Regular Gram operator; use singular_sweep for near-singular W",
                g.regularity().epsilon);
  }
  TransferReport r;
  r.hilbert_bounds = frame_bounds(f, FrameSetting::hilbert(f.ambient_dim()), tol);
  r.krein_bounds = frame_bounds(f, FrameSetting::krein(g), tol);

  const double w_norm = g.norm();
  const double w_inv_norm = g.inverse_norm();
  r.certified_low = r.hilbert_bounds.lower / (w_inv_norm * w_norm);
  r.certified_high = r.hilbert_bounds.upper * w_norm * w_inv_norm;
  r.unnormalized_low = r.hilbert_bounds.lower / w_inv_norm;
  r.unnormalized_high = r.hilbert_bounds.upper * w_norm;
  r.sandwich_holds = r.certified_low - kSandwichSlack <= r.krein_bounds.lower &&
                     r.krein_bounds.upper <= r.certified_high + kSandwichSlack;
  return r;
}

WeightedSubspaceFamily transfer_map_hilbert_to_krein(const WeightedSubspaceFamily& f, const GramOperator& g) {
  require_above_floor(g);
  return f.mapped(g.inv_sqrt_abs().matrix());
}

WeightedSubspaceFamily transfer_map_krein_to_hilbert(const WeightedSubspaceFamily& f, const GramOperator& g) {
  require_above_floor(g);
  return f.mapped(g.sqrt_abs().matrix());
}

TransferPreservation check_transfer_preservation(const WeightedSubspaceFamily& f, const GramOperator& g,
                                                 double rel_tol, const FrameTolerances& tol) {
  TransferPreservation p;
  const std::size_t d = f.ambient_dim();
  const WeightedSubspaceFamily image = transfer_map_hilbert_to_krein(f, g);
  const WeightedSubspaceFamily preimage = transfer_map_krein_to_hilbert(f, g);

  p.source_hilbert = frame_bounds(f, FrameSetting::hilbert(d), tol);
  p.image_krein = frame_bounds(image, FrameSetting::krein(g), tol);
  p.image_j_hilbert = frame_bounds(image, FrameSetting::j_hilbert(g), tol);
  p.source_krein = frame_bounds(f, FrameSetting::krein(g), tol);
  p.source_j_hilbert = frame_bounds(f, FrameSetting::j_hilbert(g), tol);
  p.preimage_hilbert = frame_bounds(preimage, FrameSetting::hilbert(d), tol);

  p.forward_krein_preserved = bounds_agree(p.source_hilbert, p.image_krein, rel_tol, p.max_relative_gap);
  p.forward_j_hilbert_preserved = bounds_agree(p.source_hilbert, p.image_j_hilbert, rel_tol, p.max_relative_gap);
  p.backward_krein_preserved = bounds_agree(p.source_krein, p.preimage_hilbert, rel_tol, p.max_relative_gap);
  p.backward_j_hilbert_preserved =
      bounds_agree(p.source_j_hilbert, p.preimage_hilbert, rel_tol, p.max_relative_gap);

  const WeightedSubspaceFamily back = transfer_map_krein_to_hilbert(image, g);
  p.round_trip_identity = true;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!same_span(f.subspaces()[i], back.subspaces()[i], 1e-9)) p.round_trip_identity = false;
  return p;
}

GramFamily diagonal_family(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::Validation, "diagonal family needs d >= 1");
  return [d](double eps) {
    Vector diag(d, 1.0);
    diag.back() = eps;
    return GramOperator::build(SymmetricMatrix::diagonal(diag));
  };
}

GramFamily deflated_family(const SymmetricMatrix& w) {
  const EigenDecomposition eig = symmetric_eig(w);
  std::size_t smallest = 0;
  double largest = 0.0;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (std::abs(eig.values[k]) < std::abs(eig.values[smallest])) smallest = k;
    largest = std::max(largest, std::abs(eig.values[k]));
  }
  if (largest == 0.0) throw Error(ErrorKind::Kernel, "cannot deflate the zero operator");
  return [eig, smallest, largest](double eps) {
    EigenDecomposition e = eig;
    const double sign = e.values[smallest] < 0.0 ? -1.0 : 1.0;
    e.values[smallest] = sign * eps * largest;
    return GramOperator::build(reconstruct(e));
  };
}

std::vector<double> SweepResult::epsilons() const {
  std::vector<double> out;
  for (const SweepPoint& p : points) out.push_back(p.epsilon);
  return out;
}

std::vector<double> SweepResult::lower_bounds() const {
  std::vector<double> out;
  for (const SweepPoint& p : points)
    out.push_back(p.krein_bounds ? p.krein_bounds->lower : std::numeric_limits<double>::quiet_NaN());
  return out;
}

SweepResult singular_sweep(const WeightedSubspaceFamily& f, const GramFamily& family, std::vector<double> epsilons,
                           const FrameTolerances& tol) {
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  if (epsilons.size() < 4) throw Error(ErrorKind::Validation, "sweep needs at least four epsilons");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] >= kMachineFloor) || !std::isfinite(epsilons[k]))
      throw Error(ErrorKind::Validation, "sweep epsilons must be finite and >= 1e-12");
    if (k > 0 && epsilons[k] == epsilons[k - 1])
      throw Error(ErrorKind::Validation, "sweep epsilons must be distinct");
  }
  if (std::log10(epsilons.front() / epsilons.back()) < 3.0 - 1e-9)
    throw Error(ErrorKind::Validation, "sweep epsilons must span at least three decades");

  SweepResult r;
  r.hilbert_bounds = frame_bounds(f, FrameSetting::hilbert(f.ambient_dim()), tol);
  if (!r.hilbert_bounds.is_frame)
    throw Error(ErrorKind::Validation, "sweep family is not a frame of subspaces for (H, <.,.>)");
  r.max_weight = f.max_weight();
  r.envelope_constant = r.hilbert_bounds.upper * r.max_weight * r.max_weight / r.hilbert_bounds.lower;

  // Points are independent; results keep the grid order.
  std::vector<std::future<SweepPoint>> pending;
  pending.reserve(epsilons.size());
  for (double eps : epsilons) {
    pending.push_back(std::async(std::launch::async, [&f, &family, &tol, &r, eps] {
      SweepPoint p;
      p.epsilon = eps;
      try {
        const GramOperator g = family(eps);
        p.condition_number = g.regularity().condition_number;
        p.certified_ratio = (r.hilbert_bounds.upper / r.hilbert_bounds.lower) * p.condition_number *
                            p.condition_number;
        p.krein_bounds = frame_bounds(f, FrameSetting::krein(g), tol);
        p.envelope_holds = p.krein_bounds->lower <= r.envelope_constant * eps + 1e-12;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Degeneracy && e.kind() != ErrorKind::Kernel) throw;
        p.skipped_reason = e.what();
      }
      return p;
    }));
  }
  for (auto& fut : pending) r.points.push_back(fut.get());

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  r.envelope_holds = true;
  for (const SweepPoint& p : r.points) {
    if (!p.krein_bounds) continue;
    if (!p.envelope_holds) r.envelope_holds = false;
    const double lower = p.krein_bounds->lower;
    if (!(lower > 0.0)) continue;
    const double x = std::log(p.epsilon);
    const double y = std::log(lower);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++r.fitted_points;
  }
  if (r.fitted_points >= 2) {
    const double n = static_cast<double>(r.fitted_points);
    r.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    r.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  }
  r.slope_in_range = r.fitted_slope >= 0.9 && r.fitted_slope <= 1.1;

  r.monotone_degradation = true;
  double previous = 0.0;
  for (const SweepPoint& p : r.points) {
    if (!p.krein_bounds) continue;
    if (p.certified_ratio < previous * (1.0 - 1e-12)) r.monotone_degradation = false;
    previous = p.certified_ratio;
  }
  if (r.fitted_points < 2) r.envelope_holds = r.envelope_holds && r.fitted_points > 0;
  r.theorem_holds = r.slope_in_range && r.envelope_holds;
  return r;
}

}  // namespace kfr
