#pragma once

#include "cchain/bridge.hpp"
#include "cchain/canonical.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace cchain {

using Json = nlohmann::ordered_json;

/// Complex entries are [re, im] pairs; plain numbers are accepted on input.
Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Matrix matrix_from_json(const Json& j);

/// Numbers when they fit in 64 bits, decimal strings otherwise.
Json bigint_json(const BigInt& n);

/// {"d": …, "matrix": …}
Json local_term_json(int d, const Matrix& op);

template <typename Term>
Json local_term_json(const Term& t) {
  return local_term_json(t.site_dim(), t.op());
}

LocalTerm local_term_from_json(const Json& j, double tol = kDefaultTol);

/// Reads a local term from a file, or from stdin when path is "-".
LocalTerm load_local_term(const std::string& path, double tol = kDefaultTol);

Json to_json(const SiteDecomposition& dec);
SiteDecomposition decomposition_from_json(const Json& j);
Json to_json(const InteractionGraph& g);
Json to_json(const ScaleInvarianceVerdict& v);
Json to_json(const SpectralCensus& c);
Json to_json(const MpsDescriptor& m);
Json to_json(const CycleList& c);

/// Ground states with their bond vectors, MPS descriptors and, when
/// dense_cap allows, dense amplitude vectors.
Json to_json(const GroundStateList& list, const SiteDecomposition& dec, std::int64_t dense_cap);

Json to_json(const XSearch& s);
Json to_json(const XCheck& c);
Json to_json(const Commutification& c);
Json to_json(const PhaseReport& r);

/// Stable two-space indented rendering with a trailing newline.
std::string render(const Json& j);

}  // namespace cchain
