#include "cchain/bridge.hpp"
#include "cchain/groundspace.hpp"
#include "cchain/models.hpp"

#include <gtest/gtest.h>

using namespace cchain;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(v.size(), v.size());
  int i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

double overlap(const Vector& a, const Vector& b) { return std::abs(a.normalized().dot(b.normalized())); }

/// Unique ground state of the undeformed parent chain.
Vector ring_state(const InjectiveMpsMap& map, int N) {
  const MpsParent undeformed = mps_parent(polar_normalize(identity(map.s.rows())));
  const KernelResult k = kernel(build_chain(undeformed.p, N));
  EXPECT_EQ(k.dim, 1);
  return k.basis.col(0);
}

}  // namespace

TEST(EqXDefect, LinearInX) {
  Rng rng(81);
  const Matrix h = hermitian_part(random_gaussian(9, 9, rng));
  const Matrix x = hermitian_part(random_gaussian(3, 3, rng)), y = hermitian_part(random_gaussian(3, 3, rng));
  const cplx a(0.3, 0.0), b(-1.7, 0.0);
  EXPECT_LT((eq_x_defect(h, a * x + b * y, 3) - a * eq_x_defect(h, x, 3) - b * eq_x_defect(h, y, 3)).norm(), 1e-10);
}

TEST(VerifyX, CommutingTermAcceptsIdentity) {
  const XCheck c = verify_x(models::ising().as_local_term(), identity(2));
  EXPECT_LT(c.residual, 1e-14);
  EXPECT_TRUE(c.positive_definite);
  EXPECT_NEAR(c.min_eigenvalue, 1.0, 1e-14);
  EXPECT_TRUE(c.passes(1e-9));
  const XCheck n = verify_x(models::ising().as_local_term(), diag({1, -1}));
  EXPECT_FALSE(n.positive_definite);
  EXPECT_FALSE(n.passes(1e-9));
}

TEST(VerifyX, RejectsWrongShape) { EXPECT_THROW(verify_x(models::ising().as_local_term(), identity(3)), Error); }

TEST(SolveX, FindsSolutionForCommutingTerm) {
  const XSearch s = solve_x(models::fig2().as_local_term());
  ASSERT_TRUE(s.found());
  EXPECT_GE(s.solution_dim, 1);
  EXPECT_TRUE(verify_x(models::fig2().as_local_term(), s.candidate->x).passes(1e-8));
  EXPECT_NEAR(operator_norm(s.candidate->x), 1.0, 1e-9);
}

TEST(SolveX, RandomTermOutcomeIsConsistent) {
  Rng rng(82);
  for (int trial = 0; trial < 3; ++trial) {
    const LocalTerm h(2, hermitian_part(random_gaussian(4, 4, rng)));
    const XSearch s = solve_x(h, kDefaultTol, 9);
    if (s.found()) {
      EXPECT_TRUE(verify_x(h, s.candidate->x).passes(1e-6));
    } else {
      EXPECT_FALSE(s.note.empty());
    }
  }
}

TEST(SolveX, RecoversDeformedParentTerm) {
  Rng rng(83);
  const InjectiveMpsMap map = polar_normalize(random_pd_map(2, rng));
  const MpsParent parent = mps_parent(map);
  const XSearch s = solve_x(parent.h, kDefaultTol, 3);
  ASSERT_TRUE(s.found()) << s.note;
  EXPECT_LT(verify_x(parent.h, s.candidate->x).residual, 1e-8);
  EXPECT_GT(s.candidate->min_eigenvalue, 0.0);
}

TEST(Commutify, DiagonalExample) {
  const LocalTerm h(2, diag({0, 1, 1, 0}));
  const Commutification c = commutify(h, diag({1, 2}));
  EXPECT_LT((c.h_prime.op() - diag({0, 2, 2, 0})).norm(), 1e-12);
  EXPECT_TRUE(c.commutation.commuting);
  ASSERT_TRUE(c.correspondence.has_value());
  EXPECT_TRUE(c.correspondence->same);
  EXPECT_EQ(c.correspondence->dim_original, 2);
}

TEST(Commutify, RejectsIndefiniteX) {
  try {
    commutify(LocalTerm(2, diag({0, 1, 1, 0})), diag({1, -1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CommutificationFailed);
  }
}

TEST(PolarNormalize, RecoversPositiveFactor) {
  Rng rng(84);
  const Matrix s = random_pd_map(2, rng);
  const Matrix u = random_unitary(4, rng);
  const InjectiveMpsMap m = polar_normalize(u * s);
  EXPECT_LT((m.s - s).norm(), 1e-10);
  EXPECT_EQ(m.chi, 2);
  EXPECT_NEAR(m.phi_max.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(m.phi_max(0)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(m.phi_max(3)), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(PolarNormalize, RejectsSingularAndBadShapes) {
  try {
    polar_normalize(diag({1, 1, 1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularS);
  }
  EXPECT_THROW(polar_normalize(identity(3)), Error);
}

TEST(MpsParent, UndeformedTermIsCommutingProjector) {
  const MpsParent m = mps_parent(polar_normalize(identity(4)));
  EXPECT_LT((m.h.op() - m.p.op()).norm(), 1e-12);
  EXPECT_TRUE(check_commuting(m.p).commuting);
  for (int N = 2; N <= 4; ++N) EXPECT_EQ(kernel(build_chain(m.p, N)).dim, 1);
}

TEST(MpsParent, DiagonalDeformation) {
  const InjectiveMpsMap map = polar_normalize(diag({1, 2, 2, 4}));
  const MpsParent m = mps_parent(map);
  EXPECT_FALSE(check_commuting(m.h.op(), 4).commuting);
  EXPECT_LT(verify_x(m.h, map.s * map.s).residual, 1e-10);
  const KernelResult k = kernel(build_chain(m.h.op(), 4, 3));
  ASSERT_EQ(k.dim, 1);
  EXPECT_GT(overlap(k.basis.col(0), apply_sitewise(map.s, ring_state(map, 3), 3)), 1.0 - 1e-8);
}

TEST(MpsParent, RandomDeformationsKeepTheRingState) {
  Rng rng(85);
  for (int trial = 0; trial < 3; ++trial) {
    const InjectiveMpsMap map = polar_normalize(random_pd_map(2, rng));
    const MpsParent m = mps_parent(map);
    EXPECT_GT(check_commuting(m.h.op(), 4).residual, 1e-3);
    const KernelResult k = kernel(build_chain(m.h.op(), 4, 4));
    ASSERT_EQ(k.dim, 1);
    EXPECT_GT(overlap(k.basis.col(0), apply_sitewise(map.s, ring_state(map, 4), 4)), 1.0 - 1e-8);
  }
}

TEST(MpsParent, SitewiseMapKeepsBondDimension) {
  Rng rng(86);
  const InjectiveMpsMap map = polar_normalize(random_pd_map(2, rng));
  const MpsParent undeformed = mps_parent(polar_normalize(identity(4)));
  const SiteDecomposition dec = decompose_site(undeformed.p);
  const BondProjectors bonds = extract_bond_projectors(undeformed.p, dec);
  const GroundStateList list = ground_states(dec, bonds, 3);
  ASSERT_EQ(list.states.size(), 1u);
  ASSERT_TRUE(list.states[0].mps.has_value());
  const MpsDescriptor& mps = *list.states[0].mps;
  EXPECT_EQ(mps.bond_dim, 2);
  const MpsDescriptor deformed = mps.apply_sitewise(map.s);
  EXPECT_EQ(deformed.bond_dim, 2);
  const Vector direct = apply_sitewise(map.s, mps.to_state(3), 3);
  EXPECT_LT((deformed.to_state(3) - direct).norm(), 1e-10 * direct.norm());
  const KernelResult k = kernel(build_chain(mps_parent(map).h.op(), 4, 3));
  ASSERT_EQ(k.dim, 1);
  EXPECT_GT(overlap(k.basis.col(0), deformed.to_state(3)), 1.0 - 1e-8);
}

TEST(ApplySitewise, MatchesKroneckerProduct) {
  Rng rng(87);
  const Matrix y = random_gaussian(3, 3, rng);
  const Vector x = random_gaussian(27, 1, rng);
  EXPECT_LT((apply_sitewise(y, x, 3) - kron(y, kron(y, y)) * x).norm(), 1e-12);
}

TEST(RandomPdMap, PositiveDefiniteAndSeeded) {
  Rng a(88), b(88);
  const Matrix s = random_pd_map(3, a);
  EXPECT_EQ(s, random_pd_map(3, b));
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  EXPECT_GT(es.eigenvalues()(0), 0.05);
  EXPECT_NEAR(es.eigenvalues()(8), 1.0, 1e-12);
}
