#include "cchain/linalg.hpp"

#include <gtest/gtest.h>

using namespace cchain;

TEST(Kron, MatchesIndexFormula) {
  Rng rng(1);
  const Matrix a = random_gaussian(2, 3, rng), b = random_gaussian(3, 2, rng);
  const Matrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 2; ++q) EXPECT_EQ(k(i * 3 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(NullSpace, AnnihilatesAndHasCorrectDimension) {
  Rng rng(2);
  const Matrix a = random_gaussian(3, 7, rng);
  const Matrix n = null_space(a, 1e-12);
  EXPECT_EQ(n.cols(), 4);
  EXPECT_LT((a * n).norm(), 1e-12);
  EXPECT_LT((n.adjoint() * n - identity(4)).norm(), 1e-12);
}

TEST(NullSpace, TallInputs) {
  Rng rng(3);
  const Matrix b = random_gaussian(40, 3, rng);
  Matrix a(40, 5);
  a << b, b.col(0) + b.col(1), b.col(2) * 2.0;
  const Matrix n = null_space(a, 1e-10);
  EXPECT_EQ(n.cols(), 2);
  EXPECT_LT((a * n).norm(), 1e-10);
}

TEST(NullSpace, ExactZerosInStructuredSystem) {
  // vec(ZA − AZ) for A = 1 ⊗ σz: the commutant system has many exactly zero
  // singular values.
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const Matrix one = identity(4);
  const Matrix a = kron(identity(2), z);
  Matrix m(32, 16);
  m << kron(a.transpose(), one) - kron(one, a), kron(identity(4).transpose(), one) - kron(one, identity(4));
  const Matrix n = null_space(m, 1e-9);
  EXPECT_EQ(n.cols(), 8);
  EXPECT_LT((m * n).norm(), 1e-12);
}

TEST(RangeBasis, SpansColumns) {
  Rng rng(4);
  const Matrix b = random_gaussian(6, 2, rng);
  Matrix a(6, 3);
  a << b, b.col(0) - b.col(1);
  const Matrix r = range_basis(a, 1e-10);
  EXPECT_EQ(r.cols(), 2);
  EXPECT_LT((a - r * r.adjoint() * a).norm(), 1e-10);
}

TEST(HermitianBasis, OrthonormalAndHermitian) {
  for (int d : {1, 2, 3, 5}) {
    const auto basis = hermitian_basis(d);
    ASSERT_EQ(static_cast<int>(basis.size()), d * d);
    EXPECT_LT((basis[0] - identity(d) / std::sqrt(double(d))).norm(), 1e-14);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_LT(hermiticity_defect(basis[i]), 1e-14);
      for (std::size_t j = 0; j < basis.size(); ++j)
        EXPECT_NEAR(std::abs(hs_inner(basis[i], basis[j])), i == j ? 1.0 : 0.0, 1e-13);
    }
  }
}

TEST(RandomUnitary, IsUnitaryAndSeeded) {
  Rng r1(5), r2(5);
  const Matrix u = random_unitary(5, r1);
  EXPECT_LT((u.adjoint() * u - identity(5)).norm(), 1e-12);
  EXPECT_EQ(u, random_unitary(5, r2));
  Rng r3(6);
  const Matrix w = random_isometry(5, 2, r3);
  EXPECT_LT((w.adjoint() * w - identity(2)).norm(), 1e-12);
}

TEST(PartialTrace, OfProductOperator) {
  Rng rng(7);
  const Matrix a = random_gaussian(2, 2, rng), b = random_gaussian(3, 3, rng), c = random_gaussian(2, 2, rng);
  const std::vector<int> dims{2, 3, 2};
  const bool keep[] = {false, true, false};
  const Matrix t = partial_trace(kron(a, b, c), dims, keep);
  EXPECT_LT((t - a.trace() * c.trace() * b).norm(), 1e-12);
  const bool keep_outer[] = {true, false, true};
  EXPECT_LT((partial_trace(kron(a, b, c), dims, keep_outer) - b.trace() * kron(a, c)).norm(), 1e-12);
}

TEST(PrincipalSqrt, SquaresBack) {
  Rng rng(8);
  const Matrix g = random_gaussian(4, 4, rng);
  const Matrix x = g * g.adjoint() + identity(4);
  const Matrix y = principal_sqrt(x, 1e-12);
  EXPECT_LT((y * y - x).norm(), 1e-10);
  EXPECT_LT(hermiticity_defect(y), 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(y);
  EXPECT_GT(es.eigenvalues()(0), 0.0);
}

TEST(SwapSites, ExchangesFactors) {
  Rng rng(9);
  const Matrix a = random_gaussian(3, 3, rng), b = random_gaussian(3, 3, rng);
  EXPECT_LT((swap_sites(kron(a, b), 3) - kron(b, a)).norm(), 1e-12);
}

TEST(ClusterSorted, SplitsAtGaps) {
  RealVector v(6);
  v << 0.0, 1e-9, 1.0, 1.0 + 1e-9, 1.0 + 2e-9, 5.0;
  const auto starts = cluster_sorted(v, 1e-6);
  EXPECT_EQ(starts, (std::vector<Eigen::Index>{0, 2, 5, 6}));
}

TEST(SubspaceDistance, DetectsRotationsAndDifferences) {
  Rng rng(10);
  const Matrix a = random_isometry(6, 3, rng);
  const Matrix mixed = a * random_unitary(3, rng);
  EXPECT_LT(subspace_distance(a, mixed), 1e-12);
  const Matrix b = random_isometry(6, 3, rng);
  EXPECT_GT(subspace_distance(a, b), 0.1);
  EXPECT_EQ(subspace_distance(a, a.leftCols(2)), 1.0);
}

TEST(MixSeed, DistinctStreams) {
  EXPECT_NE(mix_seed(0, 0), mix_seed(0, 1));
  EXPECT_NE(mix_seed(0, 1), mix_seed(1, 1));
  EXPECT_EQ(mix_seed(3, 4), mix_seed(3, 4));
}
