#pragma once

#include "cchain/graph.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace cchain {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultCycleCap = 10000;
inline constexpr std::size_t kDefaultStateCap = 10000;

struct TransferMatrices {
  Eigen::MatrixXi M;
  Eigen::MatrixXi R;

  static TransferMatrices from(const InteractionGraph& g) { return {g.M, g.R}; }
  int size() const noexcept { return static_cast<int>(M.rows()); }
};

/// Tr(M^N) in exact arithmetic.
BigInt degeneracy(const TransferMatrices& t, int N);

struct CycleList {
  std::vector<std::vector<int>> cycles;  ///< ordered; rotations are distinct
  bool truncated = false;
};

CycleList enumerate_cycles(const InteractionGraph& g, int N, std::size_t cap = kDefaultCycleCap);

struct Witness {
  enum class Kind { Cycle, HeavyLoop };
  Kind kind = Kind::Cycle;
  std::vector<int> cycle;  ///< the offending cycle, or the single heavy vertex
  int weight = 0;          ///< loop weight for HeavyLoop
};

struct ScaleInvarianceVerdict {
  bool scale_invariant = false;
  std::vector<int> loops;  ///< vertices with M[α][α] = 1
  std::optional<Witness> witness;
};

/// Scale invariant iff the non-loop edges form a DAG and every self-loop has
/// weight 1. A positive verdict is cross-checked against Tr(M^N) for
/// N = 1..2|V| and throws std::logic_error if they disagree.
ScaleInvarianceVerdict check_scale_invariance(const InteractionGraph& g);

struct SpectralCensus {
  int N = 0;
  std::map<int, BigInt> dims;  ///< energy → multiplicity, every k in 0..N

  BigInt total() const;
};

/// dims[k] = [x^k] Tr((M + xR)^N).
SpectralCensus spectral_census(const TransferMatrices& t, int N);

struct GroundLoopState {
  int block = 0;
  Vector phi;  ///< spans ker Q_{α_r, α_l}, index b·l + a
};

/// One state per self-loop of weight 1.
std::vector<GroundLoopState> loop_states(const BondProjectors& bonds);

/// Translation-invariant MPS Σ Tr(A^{s_1} ⋯ A^{s_N}) |s_1 … s_N⟩.
struct MpsDescriptor {
  int bond_dim = 0;
  std::vector<Matrix> tensor;  ///< tensor[s] is bond_dim × bond_dim

  int site_dim() const noexcept { return static_cast<int>(tensor.size()); }
  Vector to_state(int N) const;

  /// The MPS of (x ⊗ ⋯ ⊗ x)|ψ⟩; the bond dimension is unchanged.
  MpsDescriptor apply_sitewise(const Matrix& x) const;
};

/// Sitewise map of the maximally entangled ring onto |φ_α⟩^{⊗N}.
MpsDescriptor loop_mps(const SiteBlock& block, const Vector& phi);

struct GroundState {
  std::vector<int> cycle;            ///< block index per site
  std::vector<int> kernel_choice;    ///< kernel basis column per bond j → j+1
  std::vector<Vector> bond_vectors;  ///< in H_{α_r^j} ⊗ H_{α_l^{j+1}}
  std::optional<MpsDescriptor> mps;  ///< present for constant cycles
};

struct GroundStateList {
  int N = 0;
  std::vector<GroundState> states;
  bool truncated = false;
};

GroundStateList ground_states(const SiteDecomposition& dec, const BondProjectors& bonds, int N,
                              std::size_t cap = kDefaultStateCap);

/// Dense amplitude vector of a ground state on (C^d)^{⊗N}, normalized.
Vector dense_state(const SiteDecomposition& dec, const GroundState& s);

}  // namespace cchain
