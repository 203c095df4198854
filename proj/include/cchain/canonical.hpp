#pragma once

#include "cchain/groundspace.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cchain {

/// Replaces every bond factor except the weight-1 self-loops with the
/// identity. Throws NotScaleInvariant.
ProjectorTerm prune_to_loops(const ProjectorTerm& p, const SiteDecomposition& dec, const BondProjectors& bonds);

/// Reference product vectors ξ_r ∈ H_{α_r}, ξ_l ∈ H_{α_l} keyed by block.
using ReferenceChoice = std::map<int, std::pair<Vector, Vector>>;

struct DisentanglerSpec {
  std::vector<int> loops;
  std::vector<Vector> xi_r;
  std::vector<Vector> xi_l;
  std::vector<Matrix> local;  ///< U_α on H_{α_r} ⊗ H_{α_l}
  Matrix u;                   ///< on C^{d²}
};

/// Unitary on the bond mapping each loop state φ_α to ξ_{α_r} ⊗ ξ_{α_l}
/// and acting as the identity off the loop subspaces. Missing references
/// default to the first basis vector. Throws DegenerateLoopKernel.
DisentanglerSpec disentangling_unitary(const SiteDecomposition& dec, const BondProjectors& bonds,
                                       const ReferenceChoice& refs = {});

/// U P U† for a bond unitary u.
ProjectorTerm conjugate(const ProjectorTerm& p, const Matrix& u, double tol = kDefaultTol);

/// 1 ⊗ 1 − Σ_{α<k} |αα⟩⟨αα|. Throws InvalidK unless 1 ≤ k ≤ d.
ProjectorTerm canonical_hamiltonian(int k, int d);

struct CanonicalChain {
  ProjectorTerm pruned;
  DisentanglerSpec disentangler;
  ProjectorTerm disentangled;
  std::vector<Vector> site_states;  ///< |α⟩ = W_α(ξ_l ⊗ ξ_r), one per loop
  ProjectorTerm canonical;          ///< 1 − Σ |αα⟩⟨αα| in the input basis
};

CanonicalChain canonical_chain(const ProjectorTerm& p, const SiteDecomposition& dec, const BondProjectors& bonds,
                               const ReferenceChoice& refs = {}, double tol = kDefaultTol);

enum class PhaseStatus { Classified, NotCommuting, NotScaleInvariant, Frustrated };

std::string to_string(PhaseStatus s);

struct PhaseReport {
  PhaseStatus status = PhaseStatus::NotCommuting;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int d = 0;
  CommutationCheck commutation;
  std::optional<SiteDecomposition> decomposition;
  std::optional<BondProjectors> bonds;
  std::optional<InteractionGraph> graph;
  std::optional<ScaleInvarianceVerdict> verdict;
  std::optional<int> k;
  std::optional<ProjectorTerm> canonical_rep;
  std::vector<std::string> conventions;
};

/// Runs the whole pipeline. Stages after a failed check are left empty.
PhaseReport classify_phase(const ProjectorTerm& p, double tol = kDefaultTol, std::uint64_t seed = 0);

/// Same phase iff both are classified with the same degeneracy.
bool same_phase(const PhaseReport& a, const PhaseReport& b);

}  // namespace cchain
