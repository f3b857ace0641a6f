#pragma once

// Seeded fixtures shared by the unit, property and acceptance tests.

#include <cstdint>

#include "kfr/fusion.hpp"
#include "kfr/krein.hpp"
#include "kfr/random.hpp"
#include "oracles.hpp"

namespace kfr::fixtures {

struct KreinFixture {
  GramOperator g;
  WeightedSubspaceFamily f;
};

/// Random indefinite W (cond <= max_condition) with `count` random
/// r-dimensional subspaces, weights in [0.5, 2]. Resampled until every V_i,
/// J V_i and |W|^{-1/2} V_i is comfortably nondegenerate (compressed Gram
/// block condition <= 1e3).
KreinFixture indefinite(std::uint64_t seed, std::size_t d = 6, std::size_t count = 3, std::size_t r = 2,
                        double max_condition = 10.0);

/// Same, with subspaces spanned by eigenvectors of W (so J V_i = V_i).
KreinFixture eigen_aligned(std::uint64_t seed, std::size_t d = 6, std::size_t count = 3);

/// V_1 = span{(1,1)/sqrt2}, V_2 = span{(1,-1)/sqrt2}, unit weights.
WeightedSubspaceFamily canonical_misaligned();

/// Random partitioned vector system in dimension d: 2..4 blocks, block i
/// spans a random subspace of dimension 1..3 with 1..2 extra vectors.
LocalFrameSystem local_system(std::uint64_t seed, std::size_t d, const GramOperator& g);

oracle::Family to_oracle(const WeightedSubspaceFamily& f);

}  // namespace kfr::fixtures
