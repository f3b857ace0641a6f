#include "kfr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kfr/errors.hpp"

namespace kfr {

std::size_t SpectralRepresentation::dim() const {
  std::size_t d = 0;
  for (const EigenCluster& c : clusters) d += c.multiplicity;
  return d;
}

SpectralRepresentation spectral_representation(const GramOperator& g, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw Error(ErrorKind::Validation, "cluster tolerance must be positive");
  const EigenDecomposition& eig = g.eig();
  const std::size_t d = eig.values.size();
  const double diameter = eig.values.back() - eig.values.front();
  const double threshold = cluster_tol * diameter;

  SpectralRepresentation rep;
  std::vector<std::vector<std::size_t>> groups{{0}};
  for (std::size_t k = 1; k < d; ++k) {
    const double gap = eig.values[k] - eig.values[k - 1];
    if (gap <= threshold) {
      groups.back().push_back(k);
    } else {
      groups.push_back({k});
    }
    if (diameter > 0.0 && gap > threshold / 10.0 && gap <= threshold * 10.0) {
      std::ostringstream msg;
      msg << "ambiguous clustering: gap " << gap << " between eigenvalues " << eig.values[k - 1] << " and "
          << eig.values[k] << " is within a factor 10 of the cluster threshold " << threshold;
      rep.warnings.push_back(msg.str());
    }
  }

  for (const auto& group : groups) {
    EigenCluster c;
    c.multiplicity = group.size();
    c.eigenvectors = Matrix(d, group.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < group.size(); ++j) {
      sum += eig.values[group[j]];
      c.eigenvectors.set_column(j, eig.vectors.column(group[j]));
    }
    c.eigenvalue = sum / static_cast<double>(group.size());
    rep.max_multiplicity = std::max(rep.max_multiplicity, c.multiplicity);
    rep.clusters.push_back(std::move(c));
  }

  for (std::size_t n = 0; n < rep.max_multiplicity; ++n) {
    SpectralBlock block;
    std::vector<Vector> columns;
    for (std::size_t k = 0; k < rep.clusters.size(); ++k) {
      const EigenCluster& c = rep.clusters[k];
      if (c.multiplicity <= n) continue;
      columns.push_back(c.eigenvectors.column(n));
      block.measure.atoms.push_back({c.eigenvalue, 1.0});
      block.clusters.push_back(k);
    }
    block.basis = Matrix::from_columns(columns);
    block.coordinate_map = block.basis.transposed();
    rep.blocks.push_back(std::move(block));
  }
  return rep;
}

WeightedSubspaceFamily ortho_basis_of_subspaces(const SpectralRepresentation& rep) {
  std::vector<double> weights(rep.blocks.size(), 1.0);
  std::vector<Subspace> spans;
  for (const SpectralBlock& b : rep.blocks) spans.push_back(Subspace::from_orthonormal(b.basis));
  return {std::move(weights), std::move(spans)};
}

KreinDecomposition krein_decomposition(const GramOperator& g, const SpectralRepresentation& rep) {
  if (rep.dim() != g.dim()) throw Error(ErrorKind::Dimension, "spectral representation is for another operator");
  KreinDecomposition out;
  const Matrix& absw = g.abs().matrix();
  for (const SpectralBlock& b : rep.blocks) {
    KreinBlock kb;
    kb.basis = orthonormalize(g.inv_sqrt_abs().matrix() * b.basis);
    Matrix scaled = b.basis;
    for (std::size_t j = 0; j < b.measure.atoms.size(); ++j) {
      const double lambda = b.measure.atoms[j].location;
      const double s = 1.0 / std::sqrt(std::abs(lambda));
      kb.weighted_measure.atoms.push_back({lambda, std::abs(lambda) * b.measure.atoms[j].mass});
      kb.scaling.push_back(s);
      for (std::size_t i = 0; i < scaled.rows(); ++i) scaled(i, j) *= s;
    }
    const Matrix gram = scaled.transposed() * absw * scaled;
    kb.isometry_residual = max_abs(gram - Matrix::identity(gram.rows()));
    out.blocks.push_back(std::move(kb));
  }
  return out;
}

double multiplication_form_residual(const GramOperator& g, const SpectralRepresentation& rep, std::size_t n) {
  const SpectralBlock& b = rep.blocks.at(n);
  Vector lambdas;
  for (const Atom& a : b.measure.atoms) lambdas.push_back(a.location);
  return frobenius_norm(b.coordinate_map * g.w().matrix() * b.basis - Matrix::diagonal(lambdas));
}

double invariance_residual(const GramOperator& g, const SpectralRepresentation& rep, std::size_t n) {
  const Matrix& b = rep.blocks.at(n).basis;
  const Matrix p = b * b.transposed();
  const Matrix complement = Matrix::identity(p.rows()) - p;
  return frobenius_norm(complement * g.w().matrix() * p);
}

}  // namespace kfr
