#pragma once

#include "cchain/operators.hpp"

#include <string>
#include <vector>

namespace cchain::models {

/// 1 ⊗ 1 − |00⟩⟨00| − |11⟩⟨11| on qubits.
ProjectorTerm ising();

/// (1 − (σx⊗σx) ⊗ (σz⊗σz)) / 2 with two qubits per site.
ProjectorTerm fig2();

ProjectorTerm zero(int d = 2);

/// Resolves "ising", "fig2", "zero", "zero:d", "zero(d)", "canonical:k,d"
/// and "canonical(k,d)". Throws InvalidInput for unknown names.
ProjectorTerm by_name(const std::string& name);

std::vector<std::string> builtin_names();

}  // namespace cchain::models
