#include "kfr/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kfr/errors.hpp"

namespace kfr {

WeightedSubspaceFamily::WeightedSubspaceFamily(std::vector<double> weights, std::vector<Subspace> subspaces)
    : weights_(std::move(weights)), subspaces_(std::move(subspaces)) {
  if (weights_.empty()) throw Error(ErrorKind::Validation, "family must contain at least one subspace");
  if (weights_.size() != subspaces_.size())
    throw Error(ErrorKind::Validation, "weights and subspaces differ in count");
  for (double x : weights_)
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::Validation, "weights must be positive");
  const std::size_t d = subspaces_.front().ambient_dim();
  for (const Subspace& v : subspaces_) {
    if (v.ambient_dim() != d) throw Error(ErrorKind::Validation, "subspaces have different ambient dimensions");
    if (v.empty()) throw Error(ErrorKind::Validation, "family member is the zero subspace");
  }
}

double WeightedSubspaceFamily::max_weight() const {
  return *std::max_element(weights_.begin(), weights_.end());
}

WeightedSubspaceFamily WeightedSubspaceFamily::mapped(const Matrix& a) const {
  std::vector<Subspace> images;
  images.reserve(subspaces_.size());
  for (const Subspace& v : subspaces_) images.push_back(v.image(a));
  return {weights_, std::move(images)};
}

FrameSetting FrameSetting::hilbert(std::size_t d) {
  return {SymmetricMatrix::identity(d), ProjectionKind::Orthogonal, nullptr};
}

FrameSetting FrameSetting::krein(const GramOperator& g) {
  return {g.abs(), ProjectionKind::JOrthogonal, &g};
}

FrameSetting FrameSetting::j_hilbert(const GramOperator& g) {
  return {g.abs(), ProjectionKind::Orthogonal, &g};
}

FrameBounds classify_bounds(double lower, double upper, const FrameTolerances& tol) {
  FrameBounds b;
  b.lower = std::max(0.0, lower);
  b.upper = std::max(b.lower, upper);
  b.is_frame = b.lower > tol.frame;
  b.is_tight = b.is_frame && (b.upper - b.lower <= tol.tight * b.upper);
  b.is_parseval = b.is_tight && std::abs(b.lower - 1.0) <= tol.tight;
  return b;
}

std::vector<Matrix> member_projections(const WeightedSubspaceFamily& f, const FrameSetting& s) {
  if (f.ambient_dim() != s.metric.dim()) throw Error(ErrorKind::Dimension, "family and metric dimensions differ");
  if (s.kind == ProjectionKind::JOrthogonal && s.gram == nullptr)
    throw Error(ErrorKind::Validation, "J-orthogonal projections need a Gram operator");
  std::vector<Matrix> out;
  out.reserve(f.size());
  for (const Subspace& v : f.subspaces()) {
    out.push_back(s.kind == ProjectionKind::Orthogonal ? orthogonal_projection(v, s.metric).matrix
                                                       : j_orthogonal_projection_gram(v, *s.gram).matrix);
  }
  return out;
}

SymmetricMatrix frame_operator(const WeightedSubspaceFamily& f, const FrameSetting& s) {
  const std::vector<Matrix> pis = member_projections(f, s);
  const std::size_t d = f.ambient_dim();
  Matrix m(d, d);
  for (std::size_t i = 0; i < pis.size(); ++i) {
    const double x2 = f.weights()[i] * f.weights()[i];
    m += x2 * (pis[i].transposed() * s.metric.matrix() * pis[i]);
  }
  return SymmetricMatrix(std::move(m));
}

FrameBounds frame_bounds(const WeightedSubspaceFamily& f, const FrameSetting& s, const FrameTolerances& tol) {
  const RayleighExtremes r = extremal_rayleigh(frame_operator(f, s), s.metric);
  return classify_bounds(r.min, r.max, tol);
}

bool agree_relative(double a, double b, double rel_tol, double scale) {
  const double gap = std::abs(a - b);
  return gap <= rel_tol * std::max(std::abs(a), std::abs(b)) || gap <= 1e-12 * std::abs(scale);
}

namespace {

double relative_gap(double a, double b, double scale) {
  const double gap = std::abs(a - b);
  if (gap <= 1e-12 * std::abs(scale)) return 0.0;
  return gap / std::max(std::abs(a), std::abs(b));
}

}  // namespace

FourWayReport verify_four_way_equivalence(const WeightedSubspaceFamily& f, const GramOperator& g,
                                          double rel_tol, const FrameTolerances& tol) {
  FourWayReport r;
  const WeightedSubspaceFamily jf = f.mapped(g.j().matrix());

  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!is_projectively_complete(f.subspaces()[i], g).complete)
      r.degenerate_items.push_back("V_" + std::to_string(i));
    if (!is_projectively_complete(jf.subspaces()[i], g).complete)
      r.degenerate_items.push_back("JV_" + std::to_string(i));
  }

  if (r.degenerate_items.empty()) {
    r.bounds[0] = frame_bounds(f, FrameSetting::krein(g), tol);
    r.bounds[1] = frame_bounds(jf, FrameSetting::krein(g), tol);
  }
  r.bounds[2] = frame_bounds(f, FrameSetting::j_hilbert(g), tol);
  r.bounds[3] = frame_bounds(jf, FrameSetting::j_hilbert(g), tol);

  double scale = 0.0;
  for (const auto& b : r.bounds)
    if (b) scale = std::max(scale, b->upper);

  auto pair_agrees = [&](std::size_t a, std::size_t b) {
    if (!r.bounds[a] || !r.bounds[b]) return false;
    const FrameBounds& x = *r.bounds[a];
    const FrameBounds& y = *r.bounds[b];
    r.max_relative_gap = std::max({r.max_relative_gap, relative_gap(x.lower, y.lower, scale),
                                   relative_gap(x.upper, y.upper, scale)});
    return agree_relative(x.lower, y.lower, rel_tol, scale) && agree_relative(x.upper, y.upper, rel_tol, scale);
  };
  r.i_ii_agree = pair_agrees(0, 1);
  r.iii_iv_agree = pair_agrees(2, 3);
  r.i_iii_agree = pair_agrees(0, 2);
  const bool i_iv = pair_agrees(0, 3);
  const bool ii_iii = pair_agrees(1, 2);
  const bool ii_iv = pair_agrees(1, 3);

  r.is_frame_agrees = true;
  for (const auto& b : r.bounds)
    if (b && b->is_frame != r.bounds[2]->is_frame) r.is_frame_agrees = false;
  if (!r.degenerate_items.empty()) r.is_frame_agrees = false;

  r.theorem_holds = r.degenerate_items.empty() && r.i_ii_agree && r.iii_iv_agree && r.i_iii_agree && i_iv &&
                    ii_iii && ii_iv;
  return r;
}

FrameBounds vector_frame_bounds(std::span<const Vector> vectors, const SymmetricMatrix& metric,
                                const FrameTolerances& tol) {
  if (vectors.empty()) throw Error(ErrorKind::Validation, "vector frame needs at least one vector");
  const std::size_t d = metric.dim();
  Matrix m(d, d);
  for (const Vector& fv : vectors) {
    if (fv.size() != d) throw Error(ErrorKind::Dimension, "frame vector length differs from the metric");
    const Vector gf = metric.matrix() * fv;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) += gf[i] * gf[j];
  }
  const RayleighExtremes r = extremal_rayleigh(SymmetricMatrix(std::move(m)), metric);
  return classify_bounds(r.min, r.max, tol);
}

LocalFrameReport local_frames_to_fusion(const LocalFrameSystem& system, const GramOperator& g,
                                        const FrameTolerances& tol) {
  const std::size_t n = system.blocks.size();
  if (n == 0) throw Error(ErrorKind::Validation, "local frame system has no blocks");
  if (system.weights.size() != n) throw Error(ErrorKind::Validation, "one weight per block required");
  if (!system.recorded.empty() && system.recorded.size() != n)
    throw Error(ErrorKind::Validation, "recorded subspaces must match the block count");

  LocalFrameReport r;
  std::vector<Subspace> spans;
  std::vector<Vector> weighted_vectors;
  std::vector<Vector> weighted_orthonormal;
  const Matrix& absw = g.abs().matrix();

  for (std::size_t i = 0; i < n; ++i) {
    const auto& block = system.blocks[i];
    if (block.empty()) throw Error(ErrorKind::Validation, "block " + std::to_string(i) + " is empty");
    Subspace v = Subspace::span(block);
    if (v.empty()) throw Error(ErrorKind::Validation, "block " + std::to_string(i) + " spans the zero subspace");
    if (!system.recorded.empty() && !same_span(v, system.recorded[i])) r.mismatched_blocks.push_back(i);

    // [.,.]_J-orthonormal basis E = B (B^T |W| B)^{-1/2} of the block span.
    const Matrix& b = v.basis();
    const SymmetricMatrix c(b.transposed() * absw * b);
    const Matrix e = b * matrix_function(c, [](double x) { return 1.0 / std::sqrt(x); }).matrix();

    // Local frame operator in E-coordinates: sum_j c_j c_j^T with c_j = E^T |W| k_j.
    const Matrix et_abs = e.transposed() * absw;
    Matrix local(e.cols(), e.cols());
    for (const Vector& k : block) {
      const Vector cj = et_abs * k;
      for (std::size_t a = 0; a < cj.size(); ++a)
        for (std::size_t bb = 0; bb < cj.size(); ++bb) local(a, bb) += cj[a] * cj[bb];
    }
    const EigenDecomposition leig = symmetric_eig(SymmetricMatrix(std::move(local)));
    const double lo = leig.values.front();
    const double hi = leig.values.back();
    if (!(lo > tol.frame)) {
      throw Error(ErrorKind::Validation,
                  "block " + std::to_string(i) + " is not a frame for its span (zero local lower bound)");
    }
    r.block_bounds.emplace_back(lo, hi);

    const double x = system.weights[i];
    for (const Vector& k : block) {
      Vector wk = k;
      for (double& t : wk) t *= x;
      weighted_vectors.push_back(std::move(wk));
    }
    for (std::size_t j = 0; j < e.cols(); ++j) {
      Vector ej = e.column(j);
      for (double& t : ej) t *= x;
      weighted_orthonormal.push_back(std::move(ej));
    }
    spans.push_back(std::move(v));
  }

  r.weighted_vectors = vector_frame_bounds(weighted_vectors, g.abs(), tol);
  r.weighted_orthonormal = vector_frame_bounds(weighted_orthonormal, g.abs(), tol);
  r.fusion = frame_bounds(WeightedSubspaceFamily(system.weights, std::move(spans)), FrameSetting::krein(g), tol);
  r.verdicts_agree = r.weighted_vectors.is_frame == r.weighted_orthonormal.is_frame &&
                     r.weighted_orthonormal.is_frame == r.fusion.is_frame;
  return r;
}

TransportResult transport_by_invertible(const WeightedSubspaceFamily& f, const Matrix& u,
                                        const SymmetricMatrix& g_src, const SymmetricMatrix& g_dst) {
  const std::size_t d = f.ambient_dim();
  if (!u.square() || u.rows() != d || g_src.dim() != d || g_dst.dim() != d)
    throw Error(ErrorKind::Dimension, "transport operands have inconsistent dimensions");
  const double cond = condition_number(u);
  if (!(cond <= 1e10)) {
    std::ostringstream msg;
    msg << "transport map is numerically singular (condition number " << cond << ")";
    throw Error(ErrorKind::Singular, msg.str(), cond);
  }
  const Matrix pulled = u.transposed() * g_dst.matrix() * u;
  const bool unitary =
      frobenius_norm(pulled - g_src.matrix()) <= 1e-9 * std::max(1.0, frobenius_norm(g_src.matrix()));
  return {f.mapped(u), unitary};
}

}  // namespace kfr
