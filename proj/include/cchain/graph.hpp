#pragma once

#include "cchain/decomposition.hpp"

#include <string>
#include <vector>

namespace cchain {

/// Nontrivial part Q_{α_r, β_l} of the two-site projector between block α
/// on the left site and block β on the right site, acting on H_{α_r} ⊗ H_{β_l}
/// (index b·l_β + a).
struct BondFactor {
  int from = 0;
  int to = 0;
  Matrix q;
  int kernel_dim = 0;
  Matrix kernel_basis;  ///< orthonormal columns spanning ker q

  int rank() const noexcept { return static_cast<int>(q.rows()) - kernel_dim; }
};

struct BondProjectors {
  std::vector<BlockDims> block_dims;
  std::vector<BondFactor> factors;  ///< row-major over (from, to)
  double factorization_residual = 0.0;
  double reconstruction_residual = 0.0;

  int size() const noexcept { return static_cast<int>(block_dims.size()); }
  const BondFactor& operator()(int from, int to) const { return factors[std::size_t(from) * block_dims.size() + to]; }
};

/// Q_{αβ} from the compression of p onto each block pair. Throws
/// FactorizationFailed when the compression is not 1 ⊗ Q ⊗ 1 or the pieces
/// do not reassemble p, both at √tol.
BondProjectors extract_bond_projectors(const ProjectorTerm& p, const SiteDecomposition& dec,
                                       double tol = kDefaultTol);

/// Σ_{αβ} (W_α ⊗ W_β)(1 ⊗ Q_{αβ} ⊗ 1)(W_α ⊗ W_β)† for arbitrary per-pair
/// operators q (row-major over block pairs).
Matrix assemble_term(const SiteDecomposition& dec, const std::vector<Matrix>& q);

struct InteractionGraph {
  int num_vertices = 0;
  Eigen::MatrixXi M;  ///< kernel dimensions
  Eigen::MatrixXi R;  ///< ranks
  std::vector<BlockDims> block_dims;

  bool has_edge(int from, int to) const { return M(from, to) > 0; }
  int num_edges() const { return static_cast<int>((M.array() > 0).count()); }
};

InteractionGraph build_graph(const BondProjectors& bonds);

/// Graphviz rendering; edges are labelled with their kernel dimension.
std::string export_dot(const InteractionGraph& g);

}  // namespace cchain
