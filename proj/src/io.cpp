#include "cchain/io.hpp"

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace cchain {

namespace {

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorKind::InvalidInput, "matrix entries must be numbers or [re, im] pairs");
}

Json int_matrix_json(const Eigen::MatrixXi& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json dims_json(const std::vector<BlockDims>& dims) {
  Json out = Json::array();
  for (const auto& b : dims) out.push_back(Json::array({b.l, b.r}));
  return out;
}

Json cycle_json(const std::vector<int>& c) {
  Json out = Json::array();
  for (int v : c) out.push_back(v);
  return out;
}

}  // namespace

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(ErrorKind::InvalidInput, "matrix must be a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[std::size_t(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::InvalidInput, "matrix rows must all have the same length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(row[std::size_t(c)]);
  }
  return m;
}

Json bigint_json(const BigInt& n) {
  if (n >= 0 && n <= BigInt(std::numeric_limits<std::uint64_t>::max())) return n.convert_to<std::uint64_t>();
  return n.str();
}

Json local_term_json(int d, const Matrix& op) {
  Json out;
  out["d"] = d;
  out["matrix"] = to_json(op);
  return out;
}

LocalTerm local_term_from_json(const Json& j, double tol) {
  if (!j.is_object() || !j.contains("d") || !j.contains("matrix"))
    throw Error(ErrorKind::InvalidInput, "local term needs fields \"d\" and \"matrix\"");
  if (!j["d"].is_number_integer()) throw Error(ErrorKind::InvalidInput, "\"d\" must be an integer");
  return LocalTerm(j["d"].get<int>(), matrix_from_json(j["matrix"]), tol);
}

LocalTerm load_local_term(const std::string& path, double tol) {
  Json j;
  try {
    if (path == "-") {
      j = Json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
      j = Json::parse(in);
    }
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return local_term_from_json(j, tol);
}

Json to_json(const SiteDecomposition& dec) {
  Json out;
  out["d"] = dec.d;
  Json blocks = Json::array();
  for (const auto& b : dec.blocks) {
    Json jb;
    jb["l"] = b.l;
    jb["r"] = b.r;
    jb["isometry"] = to_json(b.isometry);
    blocks.push_back(std::move(jb));
  }
  out["blocks"] = std::move(blocks);
  out["residuals"] = {{"second_slot", dec.residuals.second_slot},
                      {"first_slot", dec.residuals.first_slot},
                      {"isometry", dec.residuals.isometry},
                      {"completeness", dec.residuals.completeness}};
  out["seed"] = dec.seed;
  out["attempts"] = dec.attempts;
  return out;
}

SiteDecomposition decomposition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("blocks"))
    throw Error(ErrorKind::InvalidInput, "decomposition needs fields \"d\" and \"blocks\"");
  SiteDecomposition dec;
  dec.d = j["d"].get<int>();
  for (const Json& jb : j["blocks"]) {
    SiteBlock b{jb.at("l").get<int>(), jb.at("r").get<int>(), matrix_from_json(jb.at("isometry"))};
    if (b.isometry.rows() != dec.d || b.isometry.cols() != b.dim())
      throw Error(ErrorKind::InvalidInput, "isometry shape does not match the block dimensions");
    dec.blocks.push_back(std::move(b));
  }
  return dec;
}

Json to_json(const InteractionGraph& g) {
  Json out;
  out["M"] = int_matrix_json(g.M);
  out["R"] = int_matrix_json(g.R);
  out["blocks"] = dims_json(g.block_dims);
  return out;
}

Json to_json(const ScaleInvarianceVerdict& v) {
  Json out;
  out["scale_invariant"] = v.scale_invariant;
  out["loops"] = cycle_json(v.loops);
  if (v.witness) {
    Json w;
    w["kind"] = v.witness->kind == Witness::Kind::Cycle ? "cycle" : "heavy_loop";
    w["cycle"] = cycle_json(v.witness->cycle);
    if (v.witness->kind == Witness::Kind::HeavyLoop) w["weight"] = v.witness->weight;
    out["witness"] = std::move(w);
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json to_json(const SpectralCensus& c) {
  Json out;
  out["N"] = c.N;
  Json dims = Json::object();
  for (const auto& [k, v] : c.dims) dims[std::to_string(k)] = bigint_json(v);
  out["dims"] = std::move(dims);
  return out;
}

Json to_json(const MpsDescriptor& m) {
  Json out;
  out["bond_dim"] = m.bond_dim;
  out["site_dim"] = m.site_dim();
  Json t = Json::array();
  for (const auto& a : m.tensor) t.push_back(to_json(a));
  out["tensor"] = std::move(t);
  return out;
}

Json to_json(const CycleList& c) {
  Json out;
  Json list = Json::array();
  for (const auto& cyc : c.cycles) list.push_back(cycle_json(cyc));
  out["count"] = c.cycles.size();
  out["truncated"] = c.truncated;
  out["cycles"] = std::move(list);
  return out;
}

Json to_json(const GroundStateList& list, const SiteDecomposition& dec, std::int64_t dense_cap) {
  double dim = 1;
  for (int j = 0; j < list.N; ++j) dim *= dec.d;
  const bool dense = dim <= double(dense_cap);

  Json out;
  out["N"] = list.N;
  out["count"] = list.states.size();
  out["truncated"] = list.truncated;
  out["layout"] = "bond vector j lives on H_{alpha_r} of site j (x) H_{beta_l} of site j+1, index b*l+a";
  Json states = Json::array();
  for (const auto& s : list.states) {
    Json js;
    js["cycle"] = cycle_json(s.cycle);
    js["kernel_choice"] = cycle_json(s.kernel_choice);
    Json bonds = Json::array();
    for (const auto& v : s.bond_vectors) bonds.push_back(to_json(v));
    js["bond_vectors"] = std::move(bonds);
    js["mps"] = s.mps ? to_json(*s.mps) : Json(nullptr);
    if (dense) js["vector"] = to_json(dense_state(dec, s));
    states.push_back(std::move(js));
  }
  out["states"] = std::move(states);
  return out;
}

Json to_json(const XSearch& s) {
  Json out;
  out["status"] = s.found() ? "found" : "not_found";
  out["X"] = s.candidate ? to_json(s.candidate->x) : Json(nullptr);
  out["residual"] = s.candidate ? Json(s.candidate->residual) : Json(nullptr);
  out["min_eig"] = s.candidate ? Json(s.candidate->min_eigenvalue) : Json(nullptr);
  out["solution_dim"] = s.solution_dim;
  out["trials"] = s.trials;
  out["note"] = s.note;
  return out;
}

Json to_json(const XCheck& c) {
  Json out;
  out["residual"] = c.residual;
  out["min_eig"] = c.min_eigenvalue;
  out["pd"] = c.positive_definite;
  return out;
}

Json to_json(const Commutification& c) {
  Json out;
  out["h_prime"] = local_term_json(c.h_prime);
  Json cert;
  cert["commuting"] = c.commutation.commuting;
  cert["commutator_residual"] = c.commutation.residual;
  if (c.correspondence) {
    cert["kernel_correspondence"] = {{"N", c.correspondence->N},
                                     {"dim_ker_h", c.correspondence->dim_original},
                                     {"dim_ker_h_prime", c.correspondence->dim_transformed},
                                     {"same_subspace", c.correspondence->same}};
  } else {
    cert["kernel_correspondence"] = nullptr;
  }
  out["certificate"] = std::move(cert);
  return out;
}

Json to_json(const PhaseReport& r) {
  Json out;
  out["status"] = to_string(r.status);
  out["commuting"] = r.commutation.commuting;
  out["commutator_residual"] = r.commutation.residual;
  out["site_dim"] = r.d;
  if (r.decomposition) {
    out["blocks"] = dims_json(r.decomposition->dims());
    out["decomposition_residual"] = r.decomposition->residuals.max();
  } else {
    out["blocks"] = nullptr;
  }
  if (r.bonds) out["reconstruction_residual"] = r.bonds->reconstruction_residual;
  out["graph"] = r.graph ? to_json(*r.graph) : Json(nullptr);
  if (r.verdict) {
    out["scale_invariant"] = r.verdict->scale_invariant;
    const Json v = to_json(*r.verdict);
    out["loops"] = v["loops"];
    out["witness"] = v["witness"];
  } else {
    out["scale_invariant"] = nullptr;
  }
  out["degeneracy"] = r.k ? Json(*r.k) : Json(nullptr);
  out["canonical_rep"] = r.canonical_rep ? local_term_json(*r.canonical_rep) : Json(nullptr);
  out["phase_equivalence"] = "theorem-based: two terms share a phase iff both are scale invariant with equal degeneracy";
  out["conventions"] = r.conventions;
  out["tol"] = r.tol;
  out["seed"] = r.seed;
  return out;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cchain
