#pragma once

// Seeded fixture generators shared by the CLI `gen` command, the tests and
// the benchmarks.

#include <cstdint>
#include <random>
#include <vector>

#include "kfr/fusion.hpp"
#include "kfr/linalg.hpp"

namespace kfr {

using Rng = std::mt19937_64;

Vector random_gaussian_vector(std::size_t d, Rng& rng);
Matrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);
Matrix random_orthogonal(std::size_t d, Rng& rng);

/// Symmetric matrix with standard normal entries on and above the diagonal.
SymmetricMatrix random_symmetric(std::size_t d, Rng& rng);

/// Q diag(lambda) Q^T with |lambda| uniform in [1, max_condition] and random
/// signs. With `indefinite` and d >= 2 both signs are present; otherwise all
/// eigenvalues are positive.
SymmetricMatrix random_gram(std::size_t d, double max_condition, bool indefinite, Rng& rng);

/// Gram operator with prescribed eigenvalue multiplicities (sum = d). Cluster
/// values are well separated, with random signs.
SymmetricMatrix planted_gram(const std::vector<std::size_t>& multiplicities, Rng& rng);

Subspace random_subspace(std::size_t d, std::size_t r, Rng& rng);

/// `count` random r-dimensional subspaces with weights uniform in
/// [min_weight, max_weight].
WeightedSubspaceFamily random_family(std::size_t d, std::size_t count, std::size_t r, Rng& rng,
                                     double min_weight = 1.0, double max_weight = 1.0);

}  // namespace kfr
