#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "kfr/errors.hpp"
#include "kfr/linalg.hpp"
#include "kfr/random.hpp"
#include "oracles.hpp"

using namespace kfr;

namespace {

Matrix random_spd(std::size_t d, Rng& rng) {
  const Matrix a = random_gaussian_matrix(d, d, rng);
  return a * a.transposed() + Matrix::identity(d);
}

double min_rayleigh_over_samples(const SymmetricMatrix& m, const SymmetricMatrix& g, Rng& rng, double& hi) {
  double lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (int s = 0; s < 1000; ++s) {
    Vector x = random_gaussian_vector(m.dim(), rng);
    const double nx = norm2(x);
    for (double& t : x) t /= nx;
    const double q = dot(x, m.matrix() * x) / dot(x, g.matrix() * x);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return lo;
}

}  // namespace

TEST(SymmetricMatrix, AveragesOffDiagonalPairsAndRecordsAsymmetry) {
  const SymmetricMatrix s(Matrix::from_rows({{1.0, 2.0}, {2.5, 3.0}}));
  EXPECT_EQ(s(0, 1), 2.25);
  EXPECT_EQ(s(1, 0), 2.25);
  EXPECT_DOUBLE_EQ(s.asymmetry_before_averaging(), 0.5);
}

TEST(SymmetricMatrix, RejectsNonFiniteAndNonSquare) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    SymmetricMatrix(Matrix::from_rows({{1.0, nan}, {nan, 1.0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
  try {
    SymmetricMatrix(Matrix(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dimension);
  }
}

TEST(SymmetricEig, IdentityHasUnitEigenvaluesAndOrthogonalVectors) {
  const EigenDecomposition e = symmetric_eig(SymmetricMatrix::identity(3));
  for (double x : e.values) EXPECT_EQ(x, 1.0);
  EXPECT_LE(orthonormality_defect(e.vectors), 1e-15);
}

TEST(SymmetricEig, DiagonalSortedAscending) {
  const EigenDecomposition e = symmetric_eig(SymmetricMatrix::diagonal(Vector{2.0, -3.0}));
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_EQ(e.values[0], -3.0);
  EXPECT_EQ(e.values[1], 2.0);
}

TEST(SymmetricEig, RandomReconstructionAndOrthogonality) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const SymmetricMatrix m = random_symmetric(8, rng);
    const EigenDecomposition e = symmetric_eig(m);
    const double scale = std::max(1.0, frobenius_norm(m.matrix()));
    EXPECT_LE(frobenius_norm(reconstruct(e).matrix() - m.matrix()), 1e-10 * scale);
    EXPECT_LE(orthonormality_defect(e.vectors), 1e-10);
    for (std::size_t k = 1; k < e.values.size(); ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(SymmetricEig, EigenvaluesMatchEigenLibrary) {
  Rng rng(77);
  const SymmetricMatrix m = random_symmetric(12, rng);
  const EigenDecomposition e = symmetric_eig(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(oracle::to_eigen(m.matrix()));
  for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(e.values[k], ref.eigenvalues()(k), 1e-12);
}

TEST(SymmetricEig, DeterministicAndSignNormalized) {
  Rng rng(5);
  const SymmetricMatrix m = random_symmetric(7, rng);
  const EigenDecomposition a = symmetric_eig(m);
  const EigenDecomposition b = symmetric_eig(m);
  EXPECT_EQ(a.values, b.values);
  for (std::size_t j = 0; j < 7; ++j) {
    EXPECT_EQ(a.vectors.column(j), b.vectors.column(j));
    const Vector c = a.vectors.column(j);
    const auto it = std::max_element(c.begin(), c.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    EXPECT_GT(*it, 0.0);
  }
}

TEST(Orthonormalize, TwoStepGramSchmidt) {
  const Matrix q = orthonormalize(Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}}));
  ASSERT_EQ(q.cols(), 2u);
  EXPECT_LE(orthonormality_defect(q), 1e-12);
  EXPECT_NEAR(std::abs(q(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(q(1, 1)), 1.0, 1e-15);
  EXPECT_NEAR(q(2, 0), 0.0, 1e-15);
  EXPECT_NEAR(q(2, 1), 0.0, 1e-15);
}

TEST(Orthonormalize, CompressesParallelColumns) {
  const Matrix q = orthonormalize(Matrix::from_rows({{1.0, 2.0}, {0.0, 0.0}}));
  ASSERT_EQ(q.cols(), 1u);
  EXPECT_NEAR(std::abs(q(0, 0)), 1.0, 1e-15);
}

TEST(Orthonormalize, DuplicatedColumnDropsRank) {
  Rng rng(2024);
  Matrix a = random_gaussian_matrix(6, 4, rng);
  a.set_column(3, a.column(1));
  // Independent rank: eigenvalues of the Gram matrix above 1e-10 of the largest.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(oracle::to_eigen(a.transposed() * a));
  int rank = 0;
  for (int k = 0; k < 4; ++k)
    if (gram.eigenvalues()(k) > 1e-10 * gram.eigenvalues()(3)) ++rank;
  const Matrix q = orthonormalize(a);
  EXPECT_EQ(q.cols(), static_cast<std::size_t>(rank));
  EXPECT_EQ(q.cols(), 3u);
  EXPECT_LE(max_abs(q.transposed() * q - Matrix::identity(3)), 1e-12);
  // span preserved: every input column is reproduced by its projection
  const Matrix residual = a - q * (q.transposed() * a);
  EXPECT_LE(max_abs(residual), 1e-10 * max_abs(a));
}

TEST(Orthonormalize, ZeroInputGivesEmptyBasis) {
  const Matrix q = orthonormalize(Matrix(4, 2));
  EXPECT_EQ(q.rows(), 4u);
  EXPECT_EQ(q.cols(), 0u);
}

TEST(MatrixFunction, AbsOfDiagonal) {
  const SymmetricMatrix r = matrix_function(SymmetricMatrix::diagonal(Vector{2.0, -3.0}), [](double x) { return std::abs(x); });
  EXPECT_NEAR(r(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-15);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-15);
}

TEST(MatrixFunction, IdentityMapReproducesInput) {
  Rng rng(9);
  const SymmetricMatrix m = random_symmetric(6, rng);
  EXPECT_LE(frobenius_norm(matrix_function(m, [](double x) { return x; }).matrix() - m.matrix()), 1e-10);
}

TEST(MatrixFunction, SquareRootSquaredIsAbs) {
  Rng rng(11);
  const SymmetricMatrix m(random_spd(5, rng));
  const SymmetricMatrix r = matrix_function(m, [](double x) { return std::sqrt(std::abs(x)); });
  const Matrix abs_m = matrix_function(m, [](double x) { return std::abs(x); }).matrix();
  EXPECT_LE(frobenius_norm(r.matrix() * r.matrix() - abs_m), 1e-9);
}

TEST(MatrixFunction, CompositionProperty) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const SymmetricMatrix m = random_symmetric(6, rng);
    auto g = [](double x) { return x * x + 1.0; };
    auto f = [](double x) { return std::log(x); };
    const SymmetricMatrix direct = matrix_function(m, [&](double x) { return f(g(x)); });
    const SymmetricMatrix nested = matrix_function(matrix_function(m, g), f);
    EXPECT_LE(frobenius_norm(direct.matrix() - nested.matrix()), 1e-9);
  }
}

TEST(MatrixFunction, UndefinedValueIsDomainError) {
  try {
    matrix_function(SymmetricMatrix::diagonal(Vector{1.0, 0.0}), [](double x) { return 1.0 / std::sqrt(x); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
    ASSERT_TRUE(e.residual().has_value());
    EXPECT_EQ(*e.residual(), 0.0);
  }
}

TEST(ExtremalRayleigh, ConstantQuotient) {
  const RayleighExtremes r = extremal_rayleigh(SymmetricMatrix::identity(3), SymmetricMatrix::identity(3));
  EXPECT_NEAR(r.min, 1.0, 1e-15);
  EXPECT_NEAR(r.max, 1.0, 1e-15);
}

TEST(ExtremalRayleigh, DiagonalPencil) {
  const RayleighExtremes r = extremal_rayleigh(SymmetricMatrix::diagonal(Vector{1.0, 4.0}), SymmetricMatrix::identity(2));
  EXPECT_NEAR(r.min, 1.0, 1e-15);
  EXPECT_NEAR(r.max, 4.0, 1e-15);
}

TEST(ExtremalRayleigh, ClosedFormTwoByTwo) {
  const SymmetricMatrix m(Matrix::from_rows({{1.5, 0.5}, {0.5, 0.5}}));
  const RayleighExtremes r = extremal_rayleigh(m, SymmetricMatrix::identity(2));
  const auto [lo, hi] = oracle::eig2x2(1.5, 0.5, 0.5);
  EXPECT_NEAR(lo, (2.0 - std::sqrt(2.0)) / 2.0, 1e-15);
  EXPECT_NEAR(r.min, lo, 1e-14);
  EXPECT_NEAR(r.max, hi, 1e-14);
  const auto [elo, ehi] = oracle::pencil_extremes(oracle::to_eigen(m.matrix()), Eigen::MatrixXd::Identity(2, 2));
  EXPECT_NEAR(r.min, elo, 1e-14);
  EXPECT_NEAR(r.max, ehi, 1e-14);
}

TEST(ExtremalRayleigh, RandomPencilsAgainstEigenAndSampling) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const SymmetricMatrix m = random_symmetric(6, rng);
    const SymmetricMatrix g(random_spd(6, rng));
    const RayleighExtremes r = extremal_rayleigh(m, g);
    const auto [elo, ehi] = oracle::pencil_extremes(oracle::to_eigen(m.matrix()), oracle::to_eigen(g.matrix()));
    const double scale = std::max(std::abs(elo), std::abs(ehi));
    EXPECT_NEAR(r.min, elo, 1e-10 * scale);
    EXPECT_NEAR(r.max, ehi, 1e-10 * scale);
    // attained by the returned vectors
    auto quotient = [&](const Vector& x) { return dot(x, m.matrix() * x) / dot(x, g.matrix() * x); };
    EXPECT_NEAR(quotient(r.argmin), r.min, 1e-8);
    EXPECT_NEAR(quotient(r.argmax), r.max, 1e-8);
    double hi = 0.0;
    const double lo = min_rayleigh_over_samples(m, g, rng, hi);
    EXPECT_GE(lo, r.min - 1e-8);
    EXPECT_LE(hi, r.max + 1e-8);
  }
}

TEST(ExtremalRayleigh, IndefiniteMetricRejected) {
  try {
    extremal_rayleigh(SymmetricMatrix::identity(2), SymmetricMatrix::diagonal(Vector{1.0, -1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Metric);
  }
}

TEST(SingularValues, MatchEigenSvd) {
  Rng rng(31);
  const Matrix a = random_gaussian_matrix(7, 7, rng);
  const Vector s = singular_values(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(oracle::to_eigen(a));
  for (std::size_t k = 0; k < 7; ++k) EXPECT_NEAR(s[k], svd.singularValues()(k), 1e-12);
  EXPECT_NEAR(condition_number(a), svd.singularValues()(0) / svd.singularValues()(6), 1e-9 * condition_number(a));
}

TEST(SingularValues, IllConditionedDiagonal) {
  EXPECT_NEAR(condition_number(Matrix::diagonal(Vector{1.0, 1e-11})), 1e11, 1e-3);
}

TEST(SymmetricInverse, InvertsAndReportsCondition) {
  Rng rng(3);
  const SymmetricMatrix m(random_spd(4, rng));
  const SymmetricInverse inv = symmetric_inverse(m);
  EXPECT_LE(max_abs(inv.inverse.matrix() * m.matrix() - Matrix::identity(4)), 1e-12);
  EXPECT_GE(inv.condition, 1.0);
}
