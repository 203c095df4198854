#include "cchain/graph.hpp"
#include "cchain/models.hpp"
#include "corpus.hpp"

#include <gtest/gtest.h>

using namespace cchain;

namespace {

struct Pipeline {
  SiteDecomposition dec;
  BondProjectors bonds;
  InteractionGraph graph;
};

Pipeline run(const ProjectorTerm& p) {
  Pipeline out{decompose_site(p), {}, {}};
  out.bonds = extract_bond_projectors(p, out.dec);
  out.graph = build_graph(out.bonds);
  return out;
}

/// Expectation value of a Hermitian operator on the single state of a
/// one-dimensional block.
double sign_on(const SiteBlock& b, const Matrix& op) {
  const Vector v = b.isometry.col(0);
  return (v.adjoint() * op * v)(0, 0).real();
}

}  // namespace

TEST(BondProjectors, Ising) {
  const Pipeline r = run(models::ising());
  ASSERT_EQ(r.bonds.size(), 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const BondFactor& f = r.bonds(a, b);
      ASSERT_EQ(f.q.rows(), 1);
      EXPECT_NEAR(f.q(0, 0).real(), a == b ? 0.0 : 1.0, 1e-12);
      EXPECT_EQ(f.kernel_dim, a == b ? 1 : 0);
    }
  EXPECT_EQ(r.graph.M, Eigen::MatrixXi::Identity(2, 2));
  Eigen::MatrixXi anti(2, 2);
  anti << 0, 1, 1, 0;
  EXPECT_EQ(r.graph.R, anti);
}

TEST(BondProjectors, Fig2MatchesSignOracle) {
  const Pipeline r = run(models::fig2());
  Matrix sx = Matrix::Zero(2, 2), sz = Matrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  sz(0, 0) = 1.0, sz(1, 1) = -1.0;
  const Matrix xx = kron(sx, sx), zz = kron(sz, sz);
  ASSERT_EQ(r.graph.num_vertices, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double product = sign_on(r.dec.blocks[a], xx) * sign_on(r.dec.blocks[b], zz);
      EXPECT_NEAR(r.bonds(a, b).q(0, 0).real(), (1.0 - product) / 2.0, 1e-9);
      EXPECT_EQ(r.graph.M(a, b), product > 0 ? 1 : 0);
    }
  EXPECT_EQ(r.graph.num_edges(), 8);
  Eigen::MatrixXi expected(4, 4);
  expected << 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0;
  const std::vector<BlockDims> unit(4, {1, 1});
  EXPECT_TRUE(fixtures::same_graph_up_to_relabelling(r.graph.M, r.graph.block_dims, expected, unit));
}

TEST(BondProjectors, ZeroTermIsOneFullKernelLoop) {
  const Pipeline r = run(models::zero(2));
  ASSERT_EQ(r.graph.num_vertices, 1);
  EXPECT_EQ(r.graph.M(0, 0), 2);
  EXPECT_EQ(r.graph.R(0, 0), 0);
}

TEST(InteractionGraph, RowSumsMatchBondDimensions) {
  for (const auto& e : fixtures::synthesized_corpus(10)) {
    const Pipeline r = run(e.term);
    int sum_l = 0;
    for (const auto& b : r.graph.block_dims) sum_l += b.l;
    for (int a = 0; a < r.graph.num_vertices; ++a)
      EXPECT_EQ((r.graph.M.row(a) + r.graph.R.row(a)).sum(), r.graph.block_dims[a].r * sum_l) << e.name;
  }
}

TEST(BondProjectors, ReconstructSynthesizedTerms) {
  for (const auto& e : fixtures::synthesized_corpus()) {
    const Pipeline r = run(e.term);
    EXPECT_LT(r.bonds.factorization_residual, 1e-8) << e.name;
    EXPECT_LT(r.bonds.reconstruction_residual, 1e-8) << e.name;
    std::vector<Matrix> q;
    for (const auto& f : r.bonds.factors) q.push_back(f.q);
    EXPECT_LT((assemble_term(r.dec, q) - e.term.op()).norm(), 1e-8) << e.name;
    for (const auto& f : r.bonds.factors) {
      EXPECT_LT((f.q * f.q - f.q).norm(), 1e-8);
      if (f.kernel_dim > 0) EXPECT_LT((f.q * f.kernel_basis).norm(), 1e-8);
    }
    EXPECT_TRUE(fixtures::same_graph_up_to_relabelling(r.graph.M, r.graph.block_dims, e.spec.kernel_dims,
                                                      e.spec.blocks))
        << e.name;
  }
}

TEST(BondProjectors, RejectsForeignDecomposition) {
  const SiteDecomposition wrong{2, {SiteBlock{1, 2, identity(2)}}, {}, 0, 0};
  EXPECT_THROW(extract_bond_projectors(models::ising(), wrong), Error);
}

TEST(ExportDot, ListsVerticesAndEdges) {
  const Pipeline r = run(models::fig2());
  const std::string dot = export_dot(r.graph);
  EXPECT_EQ(dot.rfind("digraph interaction {", 0), 0u);
  std::size_t arrows = 0;
  for (std::size_t pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 2)) ++arrows;
  EXPECT_EQ(arrows, 8u);
  for (int a = 0; a < 4; ++a) EXPECT_NE(dot.find("a" + std::to_string(a) + " [label="), std::string::npos);
  EXPECT_NE(dot.find("k=1"), std::string::npos);
}
