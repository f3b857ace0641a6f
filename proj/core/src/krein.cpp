#include "kfr/krein.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kfr/errors.hpp"

namespace kfr {

GramOperator GramOperator::build(const SymmetricMatrix& w, double epsilon_threshold) {
  if (w.dim() == 0) throw Error(ErrorKind::Validation, "Gram operator must have dimension >= 1");
  if (!(epsilon_threshold > 0.0)) throw Error(ErrorKind::Validation, "epsilon threshold must be positive");

  GramOperator g;
  g.w_ = w;
  g.eig_ = symmetric_eig(w);

  double lo = std::abs(g.eig_.values.front());
  double hi = 0.0;
  for (double v : g.eig_.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (hi == 0.0 || lo <= kKernelTol * hi) {
    std::ostringstream msg;
    msg << "W has a numerically nontrivial kernel (min |eigenvalue| " << lo
        << ", max |eigenvalue| " << hi << ")";
    throw Error(ErrorKind::Kernel, msg.str(), lo);
  }

  g.j_ = matrix_function(g.eig_, [](double x) { return x > 0.0 ? 1.0 : -1.0; });
  g.abs_ = matrix_function(g.eig_, [](double x) { return std::abs(x); });
  g.sqrt_abs_ = matrix_function(g.eig_, [](double x) { return std::sqrt(std::abs(x)); });
  g.inv_sqrt_abs_ = matrix_function(g.eig_, [](double x) { return 1.0 / std::sqrt(std::abs(x)); });

  RegularityReport& r = g.regularity_;
  r.min_abs_eigenvalue = lo;
  r.max_abs_eigenvalue = hi;
  r.condition_number = hi / lo;
  if (lo / hi < epsilon_threshold) {
    r.classification = Regularity::NearSingular;
    r.epsilon = lo;
  }
  return g;
}

double w_inner(const GramOperator& g, std::span<const double> x, std::span<const double> y) {
  if (x.size() != g.dim() || y.size() != g.dim())
    throw Error(ErrorKind::Dimension, "vector length differs from the Gram operator dimension");
  return dot(g.w().matrix() * x, y);
}

double j_inner(const GramOperator& g, std::span<const double> x, std::span<const double> y) {
  if (x.size() != g.dim() || y.size() != g.dim())
    throw Error(ErrorKind::Dimension, "vector length differs from the Gram operator dimension");
  return dot(g.abs().matrix() * x, y);
}

double j_norm(const GramOperator& g, std::span<const double> x) {
  return std::sqrt(std::max(0.0, j_inner(g, x, x)));
}

NormEquivalence norm_equivalence_constants(const GramOperator& g) {
  return {g.regularity().min_abs_eigenvalue, g.regularity().max_abs_eigenvalue};
}

}  // namespace kfr
