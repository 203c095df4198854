#pragma once

#include "cchain/operators.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cchain {

/// A unital *-subalgebra of L(C^n), stored as a Hilbert–Schmidt orthonormal
/// basis.
struct OperatorAlgebra {
  int ambient_dim = 0;
  std::vector<Matrix> basis;

  std::size_t dim() const noexcept { return basis.size(); }

  /// Orthogonal projection of x onto the span.
  Matrix project(const Matrix& x) const;

  /// Basis elements as columns of an n² × dim matrix (column-major vec).
  Matrix stacked() const;
};

/// Smallest unital *-algebra containing ops.
OperatorAlgebra generate_algebra(std::span<const Matrix> ops, int ambient_dim, double tol = kDefaultTol);

/// {Z : [Z, x] = 0 for every x in ops}.
OperatorAlgebra commutant_of(std::span<const Matrix> ops, int ambient_dim, double tol = kDefaultTol);

inline OperatorAlgebra commutant(const OperatorAlgebra& a, double tol = kDefaultTol) {
  return commutant_of(a.basis, a.ambient_dim, tol);
}

/// Sine of the largest principal angle between the spans of two algebras
/// (1 when the dimensions differ).
double span_distance(const OperatorAlgebra& a, const OperatorAlgebra& b);

/// One summand H_l ⊗ H_r of the site space. Column a·r + b of the isometry
/// is the image of |a⟩_l ⊗ |b⟩_r.
struct SiteBlock {
  int l = 1;
  int r = 1;
  Matrix isometry;

  int dim() const noexcept { return l * r; }
};

/// Largest postcondition defects measured on the returned decomposition.
struct DecompositionResiduals {
  double second_slot = 0.0;   ///< factors of P acting on the site from the left bond
  double first_slot = 0.0;    ///< factors of P acting on the site from the right bond
  double isometry = 0.0;      ///< ‖W_α†W_β − δ_αβ 1‖
  double completeness = 0.0;  ///< ‖Σ_α W_αW_α† − 1‖

  double max() const { return std::max({second_slot, first_slot, isometry, completeness}); }
};

/// Block structure C^d ≅ ⊕_α H_{α_l} ⊗ H_{α_r} such that the two-site term
/// acts on the left factor through its second slot and on the right factor
/// through its first slot.
struct SiteDecomposition {
  int d = 0;
  std::vector<SiteBlock> blocks;
  DecompositionResiduals residuals;
  std::uint64_t seed = 0;
  int attempts = 0;

  std::size_t size() const noexcept { return blocks.size(); }
  std::vector<BlockDims> dims() const;
};

/// Constructive decomposition of the site space for a commuting projector.
/// Throws DecompositionFailed when no reseeding attempt meets the
/// postconditions at √tol.
SiteDecomposition decompose_site(const ProjectorTerm& p, double tol = kDefaultTol, std::uint64_t seed = 0);

/// Measures the postconditions of an arbitrary decomposition against p.
DecompositionResiduals decomposition_residuals(const ProjectorTerm& p, const std::vector<SiteBlock>& blocks,
                                               double tol = kDefaultTol);

}  // namespace cchain
