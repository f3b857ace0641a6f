#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "kfr/subspaces.hpp"

namespace kfr::fixtures {

namespace {

constexpr double kComfortableRatio = 1e-3;

bool comfortable(const WeightedSubspaceFamily& f, const GramOperator& g) {
  const WeightedSubspaceFamily jf = f.mapped(g.j().matrix());
  const WeightedSubspaceFamily uf = f.mapped(g.inv_sqrt_abs().matrix());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (is_projectively_complete(f.subspaces()[i], g).ratio < kComfortableRatio) return false;
    if (is_projectively_complete(jf.subspaces()[i], g).ratio < kComfortableRatio) return false;
    if (is_projectively_complete(uf.subspaces()[i], g).ratio < kComfortableRatio) return false;
  }
  return true;
}

}  // namespace

KreinFixture indefinite(std::uint64_t seed, std::size_t d, std::size_t count, std::size_t r, double max_condition) {
  Rng rng(seed);
  for (;;) {
    GramOperator g = GramOperator::build(random_gram(d, max_condition, true, rng));
    WeightedSubspaceFamily f = random_family(d, count, r, rng, 0.5, 2.0);
    if (comfortable(f, g)) return {std::move(g), std::move(f)};
  }
}

KreinFixture eigen_aligned(std::uint64_t seed, std::size_t d, std::size_t count) {
  Rng rng(seed);
  GramOperator g = GramOperator::build(random_gram(d, 10.0, true, rng));
  const Matrix& v = g.eig().vectors;
  std::vector<double> weights;
  std::vector<Subspace> spans;
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  for (std::size_t i = 0; i < count; ++i) {
    // two eigenvectors per member, and every eigenvector used at least once
    const std::size_t a = i % d;
    std::size_t b = pick(rng);
    if (b == a) b = (a + 1) % d;
    std::vector<Vector> cols{v.column(a), v.column(b)};
    spans.push_back(Subspace::span(cols));
    weights.push_back(weight(rng));
  }
  return {std::move(g), WeightedSubspaceFamily(std::move(weights), std::move(spans))};
}

WeightedSubspaceFamily canonical_misaligned() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Vector> v1{{s, s}};
  std::vector<Vector> v2{{s, -s}};
  return {{1.0, 1.0}, {Subspace::span(v1), Subspace::span(v2)}};
}

LocalFrameSystem local_system(std::uint64_t seed, std::size_t d, const GramOperator& g) {
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> blocks(2, 4);
  std::uniform_int_distribution<std::size_t> rank(1, 3);
  std::uniform_int_distribution<std::size_t> extra(1, 2);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    LocalFrameSystem sys;
    const std::size_t n = blocks(rng);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Matrix b = random_subspace(d, rank(rng), rng).basis();
      if (is_projectively_complete(Subspace::from_orthonormal(b), g).ratio < kComfortableRatio) ok = false;
      std::vector<Vector> vectors;
      const std::size_t m = b.cols() + extra(rng);
      for (std::size_t j = 0; j < m; ++j) {
        Vector coeffs(b.cols());
        for (double& c : coeffs) c = normal(rng);
        if (j < b.cols()) {  // the first vectors of a block already span it
          std::fill(coeffs.begin(), coeffs.end(), 0.0);
          coeffs[j] = 1.0 + std::abs(normal(rng));
        }
        vectors.push_back(b * coeffs);
      }
      sys.blocks.push_back(std::move(vectors));
      sys.weights.push_back(weight(rng));
    }
    if (ok) return sys;
  }
}

oracle::Family to_oracle(const WeightedSubspaceFamily& f) {
  oracle::Family out;
  out.weights = f.weights();
  for (const Subspace& v : f.subspaces()) out.bases.push_back(oracle::to_eigen(v.basis()));
  return out;
}

}  // namespace kfr::fixtures
