// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "cchain/bridge.hpp"
#include "cchain/canonical.hpp"
#include "cchain/commands.hpp"
#include "cchain/io.hpp"
#include "cchain/models.hpp"
#include "corpus.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace cchain;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

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

/// Longest chain for one-dimensional sites, where d^N never grows.
constexpr int kMaxLength = 12;

double hilbert_dim(int d, int N) { return std::pow(double(d), N); }

std::string str(const BigInt& n) { return n.str(); }

/// Block whose state has unit overlap with v, or -1.
int block_of(const SiteDecomposition& dec, const Vector& v) {
  for (std::size_t i = 0; i < dec.size(); ++i)
    if (dec.blocks[i].dim() == 1 && (dec.blocks[i].isometry.adjoint() * v).norm() > 1.0 - 1e-9) return int(i);
  return -1;
}

bool is_rotation_of(const std::vector<int>& cycle, const std::vector<int>& target) {
  if (cycle.size() != target.size()) return false;
  for (std::size_t s = 0; s < cycle.size(); ++s) {
    bool same = true;
    for (std::size_t j = 0; j < cycle.size() && same; ++j) same = cycle[(j + s) % cycle.size()] == target[j];
    if (same) return true;
  }
  return false;
}

Outcome ising_end_to_end() {
  Outcome o;
  const PhaseReport r = classify_phase(models::ising());
  o.require(r.commutation.commuting, "not commuting");
  o.require(r.decomposition && r.decomposition->dims() == std::vector<BlockDims>{{1, 1}, {1, 1}}, "blocks differ");
  o.require(r.graph && r.graph->M == Eigen::MatrixXi::Identity(2, 2), "graph is not two weight-1 loops");
  o.require(r.verdict && r.verdict->scale_invariant, "not scale invariant");
  o.require(r.k == 2, "degeneracy differs from 2");
  if (!o.pass) return o;
  const TransferMatrices t = TransferMatrices::from(*r.graph);
  for (int N = 2; N <= 8; ++N) {
    const KernelResult k = kernel(build_chain(models::ising(), N));
    o.require(BigInt(k.dim) == degeneracy(t, N), "ED kernel differs at N=" + std::to_string(N));
    Matrix expected = Matrix::Zero(k.basis.rows(), 2);
    expected(0, 0) = expected(k.basis.rows() - 1, 1) = 1.0;
    o.require(same_subspace(k.basis, expected), "ground space is not all-up/all-down at N=" + std::to_string(N));
  }
  if (o.pass) o.detail = "degeneracy 2, ED kernel matches for N=2..8";
  return o;
}

Outcome fig2_model() {
  Outcome o;
  const ProjectorTerm p = models::fig2();
  const Pipeline r = run(p);
  o.require(r.dec.dims() == std::vector<BlockDims>(4, {1, 1}), "expected four one-dimensional blocks");
  if (!o.pass) return o;

  const double s = 1.0 / std::sqrt(2.0);
  Vector alpha = Vector::Zero(4), gamma = Vector::Zero(4), theta = Vector::Zero(4);
  alpha(0) = s, alpha(3) = s;
  gamma(0) = s, gamma(3) = -s;
  theta(1) = s, theta(2) = s;
  const std::vector<int> target{block_of(r.dec, alpha), block_of(r.dec, gamma), block_of(r.dec, theta)};
  o.require(std::find(target.begin(), target.end(), -1) == target.end(), "could not match blocks to Bell states");
  if (!o.pass) return o;
  const CycleList cycles = enumerate_cycles(r.graph, 3);
  bool found = false;
  for (const auto& c : cycles.cycles) found = found || is_rotation_of(c, target);
  o.require(found, "cycle (alpha, gamma, theta) not enumerated");

  const ScaleInvarianceVerdict v = check_scale_invariance(r.graph);
  o.require(!v.scale_invariant, "reported scale invariant");
  o.require(v.witness && v.witness->kind == Witness::Kind::Cycle && v.witness->cycle.size() >= 2,
            "missing witness cycle");

  const TransferMatrices t = TransferMatrices::from(r.graph);
  const std::int64_t expected[] = {4, 8, 16, 32};
  for (int N = 2; N <= 5; ++N) {
    const int ed = kernel(build_chain(p, N)).dim;
    o.require(degeneracy(t, N) == ed && ed == expected[N - 2],
              "Tr(M^N)=" + str(degeneracy(t, N)) + " vs ED " + std::to_string(ed) + " at N=" + std::to_string(N));
  }
  if (o.pass) o.detail = "witness length " + std::to_string(v.witness->cycle.size()) + ", Tr(M^N) = 4, 8, 16, 32";
  return o;
}

Outcome census_equivalence(const std::vector<fixtures::CorpusEntry>& corpus) {
  Outcome o;
  std::vector<std::pair<std::string, ProjectorTerm>> terms{
      {"ising", models::ising()}, {"fig2", models::fig2()}, {"zero", models::zero(2)}};
  for (const auto& e : corpus) terms.emplace_back(e.name, e.term);
  int checked = 0;
  for (const auto& [name, p] : terms) {
    const TransferMatrices t = TransferMatrices::from(run(p).graph);
    for (int N = 2; N <= kMaxLength && hilbert_dim(p.site_dim(), N) <= 4096; ++N) {
      const auto ed = integer_spectrum(build_chain(p, N));
      const SpectralCensus c = spectral_census(t, N);
      for (const auto& [k, v] : c.dims) {
        const auto it = ed.find(k);
        const std::int64_t edk = it == ed.end() ? 0 : it->second;
        o.require(v == edk, name + " N=" + std::to_string(N) + " k=" + std::to_string(k) + ": census " + str(v) +
                                " vs ED " + std::to_string(edk));
      }
      for (const auto& [k, v] : ed) o.require(c.dims.count(k) == 1, name + ": ED level " + std::to_string(k) + " missing");
      if (name == "ising") o.require(c.dims.at(1) == 0, "Ising has an energy-1 level at N=" + std::to_string(N));
      ++checked;
    }
  }
  o.require(corpus.size() >= 50, "corpus has fewer than 50 terms");
  if (o.pass) o.detail = std::to_string(terms.size()) + " terms, " + std::to_string(checked) + " chains";
  return o;
}

Outcome decomposition_suite(const std::vector<fixtures::CorpusEntry>& corpus) {
  Outcome o;
  double worst_dec = 0, worst_rec = 0;
  for (const auto& e : corpus) {
    const Pipeline r = run(e.term);
    worst_dec = std::max(worst_dec, r.dec.residuals.max());
    worst_rec = std::max(worst_rec, r.bonds.reconstruction_residual);
    o.require(fixtures::sorted_dims(r.dec.dims()) == fixtures::sorted_dims(e.spec.blocks), e.name + ": blocks differ");
  }
  o.require(worst_dec < 1e-8, "decomposition residual " + std::to_string(worst_dec));
  o.require(worst_rec < 1e-8, "reconstruction residual " + std::to_string(worst_rec));
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max residuals %.1e / %.1e", worst_dec, worst_rec);
    o.detail = buf;
  }
  return o;
}

Outcome canonicalization(const std::vector<fixtures::CorpusEntry>& corpus) {
  Outcome o;
  int instances = 0;
  for (const auto& e : corpus) {
    const Pipeline r = run(e.term);
    if (!check_scale_invariance(r.graph).scale_invariant) continue;
    ++instances;
    const CanonicalChain c = canonical_chain(e.term, r.dec, r.bonds);
    const int d = e.term.site_dim();
    const int N = hilbert_dim(d, 3) <= 4096 ? 3 : 2;
    const Eigen::Index dim = static_cast<Eigen::Index>(hilbert_dim(d, N));
    Matrix expected(dim, c.site_states.size());
    for (std::size_t i = 0; i < c.site_states.size(); ++i) {
      Vector v = c.site_states[i];
      for (int j = 1; j < N; ++j) v = kron(v, c.site_states[i]);
      expected.col(i) = v;
    }
    const KernelResult k = kernel(build_chain(c.canonical, N));
    const KernelResult kd = kernel(build_chain(c.disentangled, N));
    o.require(same_subspace(k.basis, expected, 1e-8), e.name + ": canonical kernel differs");
    o.require(same_subspace(kd.basis, expected, 1e-8), e.name + ": disentangled kernel differs");
    o.require(kernel(build_chain(e.term, N)).dim == int(c.site_states.size()), e.name + ": degeneracy changed");
  }
  for (int d = 1; d <= 6; ++d)
    for (int k = 1; k <= d; ++k)
      o.require(classify_phase(canonical_hamiltonian(k, d)).k == k,
                "canonical(" + std::to_string(k) + "," + std::to_string(d) + ") misclassified");
  if (o.pass) o.detail = std::to_string(instances) + " scale-invariant instances";
  return o;
}

Outcome bridge() {
  Outcome o;
  Rng rng(20240601);
  double worst_x = 0, worst_p = 0, min_comm = 1e300;
  for (int trial = 0; trial < 10; ++trial) {
    const InjectiveMpsMap map = polar_normalize(random_pd_map(2, rng));
    const MpsParent parent = mps_parent(map);
    const std::string tag = "map " + std::to_string(trial);
    const double comm = check_commuting(parent.h.op(), parent.h.site_dim()).residual;
    min_comm = std::min(min_comm, comm);
    o.require(comm > 1e-3, tag + ": h commutes");
    const Matrix x = map.s * map.s;
    const XCheck xc = verify_x(parent.h, x);
    worst_x = std::max(worst_x, xc.residual);
    o.require(xc.positive_definite && xc.residual < 1e-10, tag + ": verify_x residual " + std::to_string(xc.residual));
    for (int N : {3, 4}) {
      const Commutification c = commutify(parent.h, x, kDefaultTol, N);
      worst_p = std::max(worst_p, (c.h_prime.op() - parent.p.op()).cwiseAbs().maxCoeff());
      o.require(c.correspondence && c.correspondence->same, tag + ": ground spaces differ at N=" + std::to_string(N));
    }
  }
  o.require(worst_p < 1e-9, "h' differs from P by " + std::to_string(worst_p));
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "min [h,h] %.2e, max verify_x %.1e, max |h'-P| %.1e", min_comm, worst_x, worst_p);
    o.detail = buf;
  }
  return o;
}

std::string cli_output(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::vector<std::string> full{"cchain"};
  full.insert(full.end(), args.begin(), args.end());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  cli::run(full, in, out, err);
  return out.str();
}

Outcome determinism(const std::vector<fixtures::CorpusEntry>& corpus) {
  Outcome o;
  std::vector<std::pair<std::vector<std::string>, std::string>> runs{
      {{"analyze", "--model", "ising"}, ""},
      {{"analyze", "--model", "fig2", "--seed", "3"}, ""},
      {{"census", "--model", "fig2", "--N", "2..6"}, ""},
      {{"ground", "--model", "fig2", "--N", "3"}, ""},
      {{"canonical", "--model", "ising"}, ""},
      {{"bridge", "mps-parent", "--chi", "2", "--seed", "11"}, ""},
  };
  for (std::size_t i = 0; i < corpus.size(); i += 10)
    runs.push_back({{"analyze", "-", "--seed", "5", "--tol", "1e-9"}, local_term_json(corpus[i].term).dump()});
  runs.push_back({{"bridge", "solve-x", "--seed", "2"}, cli_output(runs[5].first)});
  for (const auto& [args, text] : runs) {
    const std::string a = cli_output(args, text), b = cli_output(args, text);
    o.require(!a.empty() && a == b, "output differs for " + args.front());
  }
  if (o.pass) o.detail = std::to_string(runs.size()) + " reports";
  return o;
}

}  // namespace

int main() {
  const std::vector<fixtures::CorpusEntry> corpus = fixtures::synthesized_corpus(20);
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"ising end-to-end", 1.0, ising_end_to_end},
      {"fig2 model", 10.0, fig2_model},
      {"census/ED equivalence", 300.0, [&] { return census_equivalence(corpus); }},
      {"decomposition properties", 0.0, [&] { return decomposition_suite(corpus); }},
      {"canonicalization", 0.0, [&] { return canonicalization(corpus); }},
      {"bridge", 60.0, bridge},
      {"determinism", 0.0, [&] { return determinism(corpus); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.detail = "took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_s) + " s; " + o.detail;
      o.pass = false;
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu (%s): %s  [%.2f s] %s\n", i + 1, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
