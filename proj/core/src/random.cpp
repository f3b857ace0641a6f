#include "kfr/random.hpp"

#include <algorithm>

#include "kfr/errors.hpp"

namespace kfr {

Vector random_gaussian_vector(std::size_t d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (double& x : v) x = normal(rng);
  return v;
}

Matrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

Matrix random_orthogonal(std::size_t d, Rng& rng) {
  Matrix q;
  do {
    q = orthonormalize(random_gaussian_matrix(d, d, rng));
  } while (q.cols() != d);
  return q;
}

SymmetricMatrix random_symmetric(std::size_t d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      m(i, j) = normal(rng);
      m(j, i) = m(i, j);
    }
  return SymmetricMatrix(std::move(m));
}

namespace {

SymmetricMatrix rotate_diagonal(const Vector& lambdas, Rng& rng) {
  const Matrix q = random_orthogonal(lambdas.size(), rng);
  return SymmetricMatrix(q * Matrix::diagonal(lambdas) * q.transposed());
}

}  // namespace

SymmetricMatrix random_gram(std::size_t d, double max_condition, bool indefinite, Rng& rng) {
  if (d == 0 || !(max_condition >= 1.0)) throw Error(ErrorKind::Validation, "random_gram needs d >= 1, cond >= 1");
  std::uniform_real_distribution<double> magnitude(1.0, max_condition);
  std::bernoulli_distribution coin(0.5);
  Vector lambdas(d);
  for (double& x : lambdas) x = magnitude(rng);
  if (indefinite && d >= 2) {
    for (double& x : lambdas)
      if (coin(rng)) x = -x;
    const bool has_pos = std::any_of(lambdas.begin(), lambdas.end(), [](double x) { return x > 0.0; });
    const bool has_neg = std::any_of(lambdas.begin(), lambdas.end(), [](double x) { return x < 0.0; });
    if (!has_neg) lambdas.back() = -lambdas.back();
    if (!has_pos) lambdas.front() = -lambdas.front();
  }
  return rotate_diagonal(lambdas, rng);
}

SymmetricMatrix planted_gram(const std::vector<std::size_t>& multiplicities, Rng& rng) {
  std::uniform_real_distribution<double> jitter(0.0, 0.5);
  std::bernoulli_distribution coin(0.5);
  Vector lambdas;
  double level = 1.0;
  for (std::size_t m : multiplicities) {
    if (m == 0) throw Error(ErrorKind::Validation, "multiplicities must be positive");
    const double value = (coin(rng) ? -1.0 : 1.0) * (level + jitter(rng));
    lambdas.insert(lambdas.end(), m, value);
    level += 1.0;
  }
  return rotate_diagonal(lambdas, rng);
}

Subspace random_subspace(std::size_t d, std::size_t r, Rng& rng) {
  if (r == 0 || r > d) throw Error(ErrorKind::Validation, "random_subspace needs 1 <= r <= d");
  Subspace v = Subspace::span(random_gaussian_matrix(d, r, rng));
  while (v.dim() != r) v = Subspace::span(random_gaussian_matrix(d, r, rng));
  return v;
}

WeightedSubspaceFamily random_family(std::size_t d, std::size_t count, std::size_t r, Rng& rng, double min_weight,
                                     double max_weight) {
  std::uniform_real_distribution<double> weight(min_weight, max_weight);
  std::vector<double> weights;
  std::vector<Subspace> spans;
  for (std::size_t i = 0; i < count; ++i) {
    weights.push_back(min_weight == max_weight ? min_weight : weight(rng));
    spans.push_back(random_subspace(d, r, rng));
  }
  return {std::move(weights), std::move(spans)};
}

}  // namespace kfr
