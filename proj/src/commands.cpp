#include "cchain/commands.hpp"

#include "cchain/io.hpp"
#include "cchain/models.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

namespace cchain::cli {

namespace {

struct Options {
  std::string model;
  std::string input;
  std::string lengths;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string dot_path;
  std::string json_path;
  std::size_t cap = kDefaultStateCap;
  std::int64_t ed_cap = kDefaultEdCap;

  int chi = 2;
  std::string x_path;
  std::string s_path;
  std::vector<std::string> refs;
  std::string blocks;
  std::string kernel_dims;
};

struct Context {
  Options opt;
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

void emit(Context& ctx, const Json& j) {
  if (ctx.opt.json_path.empty()) {
    ctx.out << render(j);
    return;
  }
  std::ofstream f(ctx.opt.json_path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + ctx.opt.json_path);
  f << render(j);
}

void emit_dot(Context& ctx, const InteractionGraph& g) {
  if (ctx.opt.dot_path.empty()) return;
  if (ctx.opt.dot_path == "-") {
    ctx.out << export_dot(g);
    return;
  }
  std::ofstream f(ctx.opt.dot_path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + ctx.opt.dot_path);
  f << export_dot(g);
}

Json read_json(Context& ctx, const std::string& path) {
  try {
    if (path == "-") return Json::parse(ctx.in);
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

LocalTerm load_term(Context& ctx) {
  const Options& o = ctx.opt;
  if (!o.model.empty() && !o.input.empty()) throw Error(ErrorKind::InvalidInput, "give either --model or an input file");
  if (!o.model.empty()) return models::by_name(o.model).as_local_term();
  if (o.input.empty()) throw Error(ErrorKind::InvalidInput, "no input: use --model NAME or --input FILE");
  return local_term_from_json(read_json(ctx, o.input), o.tol);
}

ProjectorTerm load_projector(Context& ctx) { return projectorize(load_term(ctx), ctx.opt.tol); }

std::vector<int> lengths_or(const Options& o, const std::string& fallback) {
  std::vector<int> ns = parse_lengths(o.lengths.empty() ? fallback : o.lengths);
  for (int n : ns)
    if (n < 1) throw Error(ErrorKind::InvalidInput, "chain lengths must be positive");
  return ns;
}

struct Pipeline {
  ProjectorTerm p;
  SiteDecomposition dec;
  BondProjectors bonds;
  InteractionGraph graph;
};

Pipeline run_pipeline(Context& ctx, const ProjectorTerm& p) {
  const CommutationCheck c = check_commuting(p, ctx.opt.tol);
  if (!c.commuting)
    throw Error(ErrorKind::NotCommuting, "two-site term does not commute with its translate; residual " +
                                             std::to_string(c.residual));
  SiteDecomposition dec = decompose_site(p, ctx.opt.tol, ctx.opt.seed);
  BondProjectors bonds = extract_bond_projectors(p, dec, ctx.opt.tol);
  InteractionGraph g = build_graph(bonds);
  return {p, std::move(dec), std::move(bonds), std::move(g)};
}

int cmd_analyze(Context& ctx) {
  const PhaseReport r = classify_phase(load_projector(ctx), ctx.opt.tol, ctx.opt.seed);
  if (r.graph) emit_dot(ctx, *r.graph);
  emit(ctx, to_json(r));
  switch (r.status) {
    case PhaseStatus::Classified: return kOk;
    case PhaseStatus::NotCommuting: return kNotCommuting;
    default: return kNotScaleInvariant;
  }
}

int cmd_graph(Context& ctx) {
  const Pipeline pl = run_pipeline(ctx, load_projector(ctx));
  emit_dot(ctx, pl.graph);
  if (ctx.opt.dot_path == "-") return kOk;
  Json j;
  j["graph"] = to_json(pl.graph);
  j["decomposition"] = to_json(pl.dec);
  j["factorization_residual"] = pl.bonds.factorization_residual;
  j["reconstruction_residual"] = pl.bonds.reconstruction_residual;
  j["verdict"] = to_json(check_scale_invariance(pl.graph));
  emit(ctx, j);
  return kOk;
}

template <typename F>
Json keyed(const std::vector<int>& ns, F&& f) {
  if (ns.size() == 1) return f(ns.front());
  Json results = Json::object();
  for (int n : ns) results[std::to_string(n)] = f(n);
  return results;
}

int cmd_degeneracy(Context& ctx) {
  const Pipeline pl = run_pipeline(ctx, load_projector(ctx));
  const TransferMatrices t = TransferMatrices::from(pl.graph);
  const std::vector<int> ns = lengths_or(ctx.opt, "2..8");
  Json j;
  if (ns.size() == 1) {
    j["N"] = ns.front();
    j["degeneracy"] = bigint_json(degeneracy(t, ns.front()));
  } else {
    j["degeneracy"] = keyed(ns, [&](int n) { return bigint_json(degeneracy(t, n)); });
  }
  emit(ctx, j);
  return kOk;
}

int cmd_census(Context& ctx) {
  const Pipeline pl = run_pipeline(ctx, load_projector(ctx));
  const TransferMatrices t = TransferMatrices::from(pl.graph);
  emit(ctx, keyed(lengths_or(ctx.opt, "3"), [&](int n) { return to_json(spectral_census(t, n)); }));
  return kOk;
}

int cmd_ground(Context& ctx) {
  const Pipeline pl = run_pipeline(ctx, load_projector(ctx));
  const std::vector<int> ns = lengths_or(ctx.opt, "4");
  emit(ctx, keyed(ns, [&](int n) {
         return to_json(ground_states(pl.dec, pl.bonds, n, ctx.opt.cap), pl.dec, ctx.opt.ed_cap);
       }));
  return kOk;
}

ReferenceChoice parse_refs(const Options& o, const SiteDecomposition& dec) {
  static const std::regex re(R"((\d+):(\d+),(\d+))");
  ReferenceChoice refs;
  for (const std::string& s : o.refs) {
    std::smatch m;
    if (!std::regex_match(s, m, re))
      throw Error(ErrorKind::InvalidInput, "--ref expects BLOCK:R_INDEX,L_INDEX, got '" + s + "'");
    const int a = std::stoi(m[1]), i = std::stoi(m[2]), k = std::stoi(m[3]);
    if (a >= static_cast<int>(dec.size())) throw Error(ErrorKind::InvalidInput, "--ref block out of range");
    const SiteBlock& b = dec.blocks[a];
    if (i >= b.r || k >= b.l) throw Error(ErrorKind::InvalidInput, "--ref index out of range");
    refs[a] = {Vector::Unit(b.r, i), Vector::Unit(b.l, k)};
  }
  return refs;
}

int cmd_canonical(Context& ctx) {
  const Pipeline pl = run_pipeline(ctx, load_projector(ctx));
  const ScaleInvarianceVerdict v = check_scale_invariance(pl.graph);
  if (!v.scale_invariant) {
    Json j;
    j["verdict"] = to_json(v);
    j["error"] = {{"kind", to_string(ErrorKind::NotScaleInvariant)},
                  {"message", "the canonical chain needs a scale-invariant term"}};
    emit(ctx, j);
    return kNotScaleInvariant;
  }
  const CanonicalChain c = canonical_chain(pl.p, pl.dec, pl.bonds, parse_refs(ctx.opt, pl.dec), ctx.opt.tol);
  Json j;
  j["k"] = v.loops.size();
  j["loops"] = v.loops;
  j["pruned"] = local_term_json(c.pruned);
  j["disentangler"] = to_json(c.disentangler.u);
  j["disentangled"] = local_term_json(c.disentangled);
  Json states = Json::array();
  for (const auto& s : c.site_states) states.push_back(to_json(s));
  j["site_states"] = std::move(states);
  j["canonical_in_input_basis"] = local_term_json(c.canonical);
  j["canonical_rep"] = v.loops.empty() ? Json(nullptr)
                                       : local_term_json(canonical_hamiltonian(int(v.loops.size()), pl.p.site_dim()));
  emit(ctx, j);
  return v.loops.empty() ? kNotScaleInvariant : kOk;
}

Matrix read_x(Context& ctx, const std::string& path) {
  Json j = read_json(ctx, path);
  if (j.is_object() && j.contains("X")) j = j["X"];
  if (j.is_null()) throw Error(ErrorKind::InvalidInput, "X is null");
  return matrix_from_json(j);
}

int cmd_mps_parent(Context& ctx) {
  Matrix s_raw;
  if (!ctx.opt.s_path.empty()) {
    s_raw = read_x(ctx, ctx.opt.s_path);
  } else {
    Rng rng(ctx.opt.seed);
    s_raw = random_pd_map(ctx.opt.chi, rng);
  }
  const InjectiveMpsMap map = polar_normalize(s_raw, ctx.opt.tol);
  const MpsParent parent = mps_parent(map, ctx.opt.tol);
  Json j = local_term_json(parent.h);
  j["chi"] = map.chi;
  j["layout"] = "site index l*chi + r; |Phi> on (r_j, l_{j+1})";
  j["S"] = to_json(map.s);
  j["P"] = local_term_json(parent.p);
  j["h_commutator_residual"] = check_commuting(parent.h, ctx.opt.tol).residual;
  j["seed"] = ctx.opt.seed;
  emit(ctx, j);
  return kOk;
}

int cmd_solve_x(Context& ctx) {
  if (ctx.opt.model.empty() && ctx.opt.input.empty()) ctx.opt.input = "-";
  const XSearch s = solve_x(load_term(ctx), ctx.opt.tol, ctx.opt.seed);
  emit(ctx, to_json(s));
  return s.found() ? kOk : kFailure;
}

int cmd_verify_x(Context& ctx) {
  if (ctx.opt.x_path.empty()) throw Error(ErrorKind::InvalidInput, "verify-x needs --x FILE");
  const LocalTerm h = load_term(ctx);
  const XCheck c = verify_x(h, read_x(ctx, ctx.opt.x_path), ctx.opt.tol);
  emit(ctx, to_json(c));
  return c.passes(std::sqrt(ctx.opt.tol)) ? kOk : kFailure;
}

int cmd_commutify(Context& ctx) {
  const LocalTerm h = load_term(ctx);
  Matrix x;
  if (!ctx.opt.x_path.empty()) {
    x = read_x(ctx, ctx.opt.x_path);
  } else {
    const XSearch s = solve_x(h, ctx.opt.tol, ctx.opt.seed);
    if (!s.found()) throw Error(ErrorKind::CommutificationFailed, s.note);
    x = s.candidate->x;
  }
  const std::vector<int> ns = lengths_or(ctx.opt, "3");
  const Commutification c = commutify(h, x, ctx.opt.tol, ns.front(), ctx.opt.ed_cap);
  emit(ctx, to_json(c));
  return c.correspondence && !c.correspondence->same ? kFailure : kOk;
}

struct Row {
  int N;
  std::string check;
  std::string expected;
  std::string observed;
  bool pass;
};

std::string census_text(const std::map<int, BigInt>& m) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : m) {
    if (v == 0) continue;
    os << (first ? "" : " ") << k << ":" << v;
    first = false;
  }
  return os.str();
}

int cmd_verify(Context& ctx) {
  const Pipeline pl = run_pipeline(ctx, load_projector(ctx));
  const TransferMatrices t = TransferMatrices::from(pl.graph);
  const int d = pl.p.site_dim();
  std::vector<int> ns;
  if (ctx.opt.lengths.empty()) {
    double dim = d * d;
    for (int n = 2; n <= 12 && dim <= double(ctx.opt.ed_cap); ++n, dim *= d) ns.push_back(n);
  } else {
    ns = lengths_or(ctx.opt, "");
  }

  std::vector<Row> rows;
  for (int n : ns) {
    if (n < 2) continue;
    const ChainHamiltonian h = build_chain(pl.p, n, ctx.opt.ed_cap);
    const KernelResult ker = kernel(h);
    const BigInt deg = degeneracy(t, n);
    rows.push_back({n, "degeneracy", deg.str(), std::to_string(ker.dim), deg == ker.dim});

    const SpectralCensus census = spectral_census(t, n);
    std::map<int, BigInt> ed;
    bool integral = true;
    try {
      for (const auto& [k, v] : integer_spectrum(h)) ed[k] = v;
    } catch (const Error&) {
      integral = false;
    }
    std::map<int, BigInt> nonzero;
    for (const auto& [k, v] : census.dims)
      if (v != 0) nonzero[k] = v;
    rows.push_back({n, "census", census_text(census.dims), integral ? census_text(ed) : "non-integer",
                    integral && nonzero == ed});

    const double shift = translation_defect(h, ctx.opt.seed);
    rows.push_back({n, "translation", "< 1e-10", (std::ostringstream() << std::scientific << std::setprecision(1) << shift).str(),
                    shift < 1e-10});

    const GroundStateList gs = ground_states(pl.dec, pl.bonds, n, ctx.opt.cap);
    double worst = 0.0;
    Matrix span(h.dim(), static_cast<Eigen::Index>(gs.states.size()));
    for (std::size_t i = 0; i < gs.states.size(); ++i) {
      const Vector psi = dense_state(pl.dec, gs.states[i]);
      worst = std::max(worst, h.apply(psi).norm());
      span.col(Eigen::Index(i)) = psi;
    }
    const bool same = gs.truncated || same_subspace(range_basis(span, 1e-10), ker.basis);
    rows.push_back({n, "ground states", "annihilated, span = kernel",
                    (std::ostringstream() << std::scientific << std::setprecision(1) << worst).str() +
                        (same ? ", span ok" : ", span differs"),
                    worst < 1e-8 && same});
  }

  bool all = true;
  Json jrows = Json::array();
  ctx.out << std::left << std::setw(4) << "N" << std::setw(15) << "check" << std::setw(28) << "expected" << ' '
          << std::setw(28) << "observed" << ' '
          << "result\n";
  for (const Row& r : rows) {
    all = all && r.pass;
    ctx.out << std::left << std::setw(4) << r.N << std::setw(15) << r.check << std::setw(28) << r.expected << ' '
            << std::setw(28) << r.observed << ' ' << (r.pass ? "PASS" : "FAIL") << "\n";
    jrows.push_back({{"N", r.N}, {"check", r.check}, {"expected", r.expected}, {"observed", r.observed},
                     {"pass", r.pass}});
  }
  ctx.out << (all ? "all checks passed\n" : "some checks FAILED\n");
  if (!ctx.opt.json_path.empty()) {
    Json j;
    j["all_pass"] = all;
    j["rows"] = std::move(jrows);
    emit(ctx, j);
  }
  return all ? kOk : kFailure;
}

std::vector<BlockDims> parse_blocks(const std::string& s) {
  static const std::regex re(R"((\d+)x(\d+))");
  std::vector<BlockDims> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::smatch m;
    if (!std::regex_match(item, m, re)) throw Error(ErrorKind::InvalidSpec, "block '" + item + "' is not LxR");
    out.push_back({std::stoi(m[1]), std::stoi(m[2])});
  }
  return out;
}

Eigen::MatrixXi parse_int_matrix(const std::string& s) {
  std::vector<std::vector<int>> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<int> r;
    std::stringstream rs(row);
    std::string x;
    while (std::getline(rs, x, ',')) r.push_back(std::stoi(x));
    rows.push_back(std::move(r));
  }
  Eigen::MatrixXi m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != m.cols())
      throw Error(ErrorKind::InvalidSpec, "kernel dimension rows differ in length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

int cmd_synthesize(Context& ctx) {
  SynthesisSpec spec{parse_blocks(ctx.opt.blocks), parse_int_matrix(ctx.opt.kernel_dims)};
  const ProjectorTerm p = synthesize_local_term(spec, ctx.opt.seed);
  Json j = local_term_json(p);
  j["seed"] = ctx.opt.seed;
  j["resolvable"] = synthesis_is_resolvable(spec);
  emit(ctx, j);
  return kOk;
}

void add_io(CLI::App* app, Options& o) {
  app->add_option("file,--input,-i", o.input, "local term JSON file ('-' for stdin)");
  app->add_option("--model,-m", o.model, "builtin model: ising, fig2, zero(d), canonical(k,d)");
  app->add_option("--tol", o.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--json", o.json_path, "write the JSON report to this file");
}

}  // namespace

std::vector<int> parse_lengths(const std::string& spec) {
  static const std::regex range(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  static const std::regex single(R"(\s*(-?\d+)\s*)");
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::smatch m;
    if (std::regex_match(item, m, range)) {
      const int a = std::stoi(m[1]), b = std::stoi(m[2]);
      if (a > b) throw Error(ErrorKind::InvalidInput, "empty range '" + item + "'");
      for (int n = a; n <= b; ++n) out.push_back(n);
    } else if (std::regex_match(item, m, single)) {
      out.push_back(std::stoi(m[1]));
    } else {
      throw Error(ErrorKind::InvalidInput, "cannot parse chain length '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "no chain lengths given");
  return out;
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  Context ctx{Options{}, in, out, err};
  Options& o = ctx.opt;

  CLI::App app{"Analyze translation-invariant commuting spin chains"};
  app.name(argc > 0 ? argv[0] : "cchain");
  app.require_subcommand(1);
  std::function<int(Context&)> action;
  auto bind = [&](CLI::App* sub, std::function<int(Context&)> f) { sub->callback([&action, f] { action = f; }); };

  auto* analyze = app.add_subcommand("analyze", "full pipeline and phase report");
  add_io(analyze, o);
  analyze->add_option("--dot", o.dot_path, "write the interaction graph as DOT ('-' for stdout)");
  bind(analyze, cmd_analyze);

  auto* graph = app.add_subcommand("graph", "site decomposition and interaction graph");
  add_io(graph, o);
  graph->add_option("--dot", o.dot_path, "write the interaction graph as DOT ('-' for stdout)");
  bind(graph, cmd_graph);

  auto* deg = app.add_subcommand("degeneracy", "ground-state degeneracy Tr(M^N)");
  add_io(deg, o);
  deg->add_option("--N,-N", o.lengths, "chain lengths: n, a..b or a list");
  bind(deg, cmd_degeneracy);

  auto* census = app.add_subcommand("census", "dimension of every energy level");
  add_io(census, o);
  census->add_option("--N,-N", o.lengths, "chain lengths: n, a..b or a list");
  bind(census, cmd_census);

  auto* ground = app.add_subcommand("ground", "explicit ground states");
  add_io(ground, o);
  ground->add_option("--N,-N", o.lengths, "chain lengths: n, a..b or a list");
  ground->add_option("--cap", o.cap, "maximum number of states");
  ground->add_option("--ed-cap", o.ed_cap, "largest d^N for dense vectors");
  bind(ground, cmd_ground);

  auto* canon = app.add_subcommand("canonical", "prune, disentangle and emit the canonical term");
  add_io(canon, o);
  canon->add_option("--ref", o.refs, "reference basis vectors BLOCK:R_INDEX,L_INDEX");
  bind(canon, cmd_canonical);

  auto* verify = app.add_subcommand("verify", "cross-check against exact diagonalization");
  add_io(verify, o);
  verify->add_option("--N,-N", o.lengths, "chain lengths (default: all with d^N within --ed-cap)");
  verify->add_option("--cap", o.cap, "maximum number of ground states");
  verify->add_option("--ed-cap", o.ed_cap, "largest d^N to diagonalize");
  bind(verify, cmd_verify);

  auto* synth = app.add_subcommand("synthesize", "random commuting term with a prescribed graph");
  synth->add_option("--blocks", o.blocks, "block dimensions, e.g. 1x1,1x2")->required();
  synth->add_option("--kernel", o.kernel_dims, "kernel dimensions, rows separated by ';'")->required();
  synth->add_option("--seed", o.seed, "random seed");
  synth->add_option("--json", o.json_path, "write the term to this file");
  bind(synth, cmd_synthesize);

  auto* bridge = app.add_subcommand("bridge", "commutification and MPS parent terms");
  bridge->require_subcommand(1);
  auto* parent = bridge->add_subcommand("mps-parent", "parent term of an injective MPS on doubled spins");
  parent->add_option("--chi", o.chi, "bond dimension")->check(CLI::PositiveNumber);
  parent->add_option("--S", o.s_path, "JSON matrix for the sitewise map (default: seeded random PD)");
  parent->add_option("--seed", o.seed, "random seed");
  parent->add_option("--tol", o.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  parent->add_option("--json", o.json_path, "write the output to this file");
  bind(parent, cmd_mps_parent);

  auto* solve = bridge->add_subcommand("solve-x", "search for a positive-definite X (reads stdin by default)");
  add_io(solve, o);
  bind(solve, cmd_solve_x);

  auto* vx = bridge->add_subcommand("verify-x", "check a candidate X");
  add_io(vx, o);
  vx->add_option("--x", o.x_path, "JSON matrix or solve-x output")->required();
  bind(vx, cmd_verify_x);

  auto* comm = bridge->add_subcommand("commutify", "conjugate by X^{1/2} and certify");
  add_io(comm, o);
  comm->add_option("--x", o.x_path, "JSON matrix or solve-x output (default: run solve-x)");
  comm->add_option("--N,-N", o.lengths, "chain length for the ground-space check");
  comm->add_option("--ed-cap", o.ed_cap, "largest d^N to diagonalize");
  bind(comm, cmd_commutify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kFailure;
  }

  try {
    return action(ctx);
  } catch (const Error& e) {
    Json j;
    j["status"] = "error";
    j["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    out << render(j);
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::NotCommuting ? kNotCommuting
           : e.kind() == ErrorKind::NotScaleInvariant ? kNotScaleInvariant
                                                       : kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), in, out, err);
}

}  // namespace cchain::cli
