#pragma once

#include "cchain/error.hpp"
#include "cchain/linalg.hpp"

#include <cstdint>
#include <vector>

namespace cchain {

inline constexpr double kDefaultTol = 1e-9;

/// Hermitian operator on two adjacent sites of dimension d each, in the
/// basis |i⟩⊗|j⟩ ↦ i·d + j (i is the left site).
class LocalTerm {
 public:
  /// Symmetrizes op when ‖op − op†‖ ≤ tol and throws NotHermitian otherwise.
  LocalTerm(int site_dim, Matrix op, double tol = kDefaultTol);

  int site_dim() const noexcept { return d_; }
  const Matrix& op() const noexcept { return op_; }

 private:
  int d_;
  Matrix op_;
};

/// A LocalTerm that is also an orthogonal projector.
class ProjectorTerm {
 public:
  ProjectorTerm(int site_dim, Matrix op, double tol = kDefaultTol);

  int site_dim() const noexcept { return d_; }
  const Matrix& op() const noexcept { return op_; }
  LocalTerm as_local_term() const { return LocalTerm(d_, op_); }

 private:
  int d_;
  Matrix op_;
};

/// Orthogonal projector onto the strictly positive eigenspaces of h.
ProjectorTerm projectorize(const LocalTerm& h, double tol = kDefaultTol);

struct CommutationCheck {
  bool commuting = false;
  double residual = 0.0;  ///< ‖[T⊗1, 1⊗T]‖ on C^{d³}
};

CommutationCheck check_commuting(const Matrix& term, int d, double tol = kDefaultTol);

template <typename Term>
CommutationCheck check_commuting(const Term& t, double tol = kDefaultTol) {
  return check_commuting(t.op(), t.site_dim(), tol);
}

/// Operator Schmidt decomposition op = Σ_k left[k] ⊗ right[k] with
/// Hermitian, mutually HS-orthogonal factors (singular values folded into
/// the left factors).
struct SchmidtPair {
  int d = 0;
  std::vector<Matrix> left;
  std::vector<Matrix> right;

  std::size_t rank() const noexcept { return left.size(); }
  Matrix reconstruct() const;
};

SchmidtPair operator_schmidt(const Matrix& op, int d, double tol = kDefaultTol);

inline SchmidtPair operator_schmidt(const ProjectorTerm& p, double tol = kDefaultTol) {
  return operator_schmidt(p.op(), p.site_dim(), tol);
}

struct BlockDims {
  int l = 1;
  int r = 1;
  int dim() const noexcept { return l * r; }
  friend bool operator==(const BlockDims&, const BlockDims&) = default;
  friend auto operator<=>(const BlockDims&, const BlockDims&) = default;
};

struct SynthesisSpec {
  std::vector<BlockDims> blocks;
  Eigen::MatrixXi kernel_dims;  ///< [α][β] = dim ker Q_{α_r, β_l}
};

/// Builds a commuting projector whose site decomposition has the given
/// blocks and whose bond projectors have the given kernel dimensions.
/// Block isometries come from a seeded Haar unitary; every nontrivial bond
/// kernel is a seeded Haar-random subspace.
ProjectorTerm synthesize_local_term(const SynthesisSpec& spec, std::uint64_t seed);

/// Whether the block structure of synthesize_local_term(spec, ·) is
/// recoverable from the operator alone for generic seeds. A block whose
/// left factor is never acted on nontrivially, or whose neighbours cannot be
/// told apart, collapses into a coarser decomposition.
bool synthesis_is_resolvable(const SynthesisSpec& spec);

}  // namespace cchain
