#include "cchain/groundspace.hpp"

#include <functional>
#include <stdexcept>

namespace cchain {

namespace {

using BigMatrix = std::vector<std::vector<BigInt>>;
using Poly = std::vector<BigInt>;  // coefficient of x^k at index k
using PolyMatrix = std::vector<std::vector<Poly>>;

void require_length(int N) {
  if (N < 1) throw Error(ErrorKind::InvalidInput, "chain length must be at least 1");
}

BigMatrix to_big(const Eigen::MatrixXi& m) {
  BigMatrix out(m.rows(), std::vector<BigInt>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
  const std::size_t n = a.size();
  BigMatrix out(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

BigMatrix big_identity(std::size_t n) {
  BigMatrix out(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

template <typename T, typename Mul>
T power(T base, int n, T result, Mul mul) {
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void poly_add(Poly& acc, const Poly& x) {
  if (acc.size() < x.size()) acc.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += x[i];
}

PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b) {
  const std::size_t n = a.size();
  PolyMatrix out(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) poly_add(out[i][j], poly_mul(a[i][k], b[k][j]));
  return out;
}

std::optional<std::vector<int>> find_cycle(const Eigen::MatrixXi& M) {
  const int n = static_cast<int>(M.rows());
  std::vector<int> color(n, 0), parent(n, -1);
  std::optional<std::vector<int>> found;
  std::function<void(int)> visit = [&](int v) {
    color[v] = 1;
    for (int w = 0; w < n && !found; ++w) {
      if (w == v || M(v, w) <= 0) continue;
      if (color[w] == 1) {
        std::vector<int> cyc{w};
        for (int u = v; u != w; u = parent[u]) cyc.insert(cyc.begin() + 1, u);
        found = cyc;
      } else if (color[w] == 0) {
        parent[w] = v;
        visit(w);
      }
    }
    color[v] = 2;
  };
  for (int v = 0; v < n && !found; ++v)
    if (color[v] == 0) visit(v);
  return found;
}

}  // namespace

BigInt degeneracy(const TransferMatrices& t, int N) {
  require_length(N);
  const BigMatrix p = power(to_big(t.M), N, big_identity(t.M.rows()),
                            [](const BigMatrix& a, const BigMatrix& b) { return multiply(a, b); });
  BigInt tr = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tr += p[i][i];
  return tr;
}

CycleList enumerate_cycles(const InteractionGraph& g, int N, std::size_t cap) {
  require_length(N);
  CycleList out;
  std::vector<int> path;
  std::function<bool()> extend = [&]() -> bool {
    const int last = path.back();
    if (static_cast<int>(path.size()) == N) {
      if (!g.has_edge(last, path.front())) return true;
      if (out.cycles.size() >= cap) {
        out.truncated = true;
        return false;
      }
      out.cycles.push_back(path);
      return true;
    }
    for (int w = 0; w < g.num_vertices; ++w) {
      if (!g.has_edge(last, w)) continue;
      path.push_back(w);
      const bool go_on = extend();
      path.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  for (int v = 0; v < g.num_vertices; ++v) {
    path.assign(1, v);
    if (!extend()) break;
  }
  return out;
}

ScaleInvarianceVerdict check_scale_invariance(const InteractionGraph& g) {
  ScaleInvarianceVerdict out;
  for (int v = 0; v < g.num_vertices; ++v) {
    const int w = g.M(v, v);
    if (w == 1) out.loops.push_back(v);
    if (w >= 2 && !out.witness) out.witness = Witness{Witness::Kind::HeavyLoop, {v}, w};
  }
  if (!out.witness)
    if (auto cyc = find_cycle(g.M)) out.witness = Witness{Witness::Kind::Cycle, *cyc, 0};
  out.scale_invariant = !out.witness;

  if (out.scale_invariant) {
    const TransferMatrices t = TransferMatrices::from(g);
    for (int N = 1; N <= 2 * std::max(g.num_vertices, 1); ++N)
      if (degeneracy(t, N) != BigInt(out.loops.size()))
        throw std::logic_error("scale-invariance verdict disagrees with Tr(M^N) at N = " + std::to_string(N));
  }
  return out;
}

BigInt SpectralCensus::total() const {
  BigInt s = 0;
  for (const auto& [k, v] : dims) s += v;
  return s;
}

SpectralCensus spectral_census(const TransferMatrices& t, int N) {
  require_length(N);
  const std::size_t n = t.M.rows();
  PolyMatrix base(n, std::vector<Poly>(n)), unit(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i) {
    unit[i][i] = Poly{1};
    for (std::size_t j = 0; j < n; ++j) base[i][j] = Poly{BigInt(t.M(i, j)), BigInt(t.R(i, j))};
  }
  const PolyMatrix p =
      power(base, N, unit, [](const PolyMatrix& a, const PolyMatrix& b) { return multiply(a, b); });
  SpectralCensus out;
  out.N = N;
  for (int k = 0; k <= N; ++k) out.dims[k] = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < p[i][i].size(); ++k) out.dims[static_cast<int>(k)] += p[i][i][k];
  return out;
}

std::vector<GroundLoopState> loop_states(const BondProjectors& bonds) {
  std::vector<GroundLoopState> out;
  for (int v = 0; v < bonds.size(); ++v) {
    const BondFactor& f = bonds(v, v);
    if (f.kernel_dim == 1) out.push_back({v, f.kernel_basis.col(0)});
  }
  return out;
}

Vector MpsDescriptor::to_state(int N) const {
  require_length(N);
  const int d = site_dim();
  Eigen::Index total = 1;
  for (int j = 0; j < N; ++j) total *= d;
  Vector out(total);
  std::vector<Matrix> prefix(N + 1);
  prefix[0] = identity(bond_dim);
  std::function<void(int, Eigen::Index)> walk = [&](int j, Eigen::Index index) {
    if (j == N) {
      out(index) = prefix[N].trace();
      return;
    }
    for (int s = 0; s < d; ++s) {
      prefix[j + 1] = prefix[j] * tensor[s];
      walk(j + 1, index * d + s);
    }
  };
  walk(0, 0);
  return out;
}

MpsDescriptor MpsDescriptor::apply_sitewise(const Matrix& x) const {
  MpsDescriptor out{bond_dim, std::vector<Matrix>(x.rows(), Matrix::Zero(bond_dim, bond_dim))};
  for (Eigen::Index s = 0; s < x.rows(); ++s)
    for (Eigen::Index t = 0; t < x.cols(); ++t) out.tensor[s] += x(s, t) * tensor[t];
  return out;
}

MpsDescriptor loop_mps(const SiteBlock& block, const Vector& phi) {
  const int l = block.l, r = block.r;
  const Eigen::Index d = block.isometry.rows();
  MpsDescriptor out{r, std::vector<Matrix>(d, Matrix::Zero(r, r))};
  for (Eigen::Index s = 0; s < d; ++s)
    for (int i = 0; i < r; ++i)
      for (int ip = 0; ip < r; ++ip)
        for (int a = 0; a < l; ++a) out.tensor[s](i, ip) += block.isometry(s, a * r + ip) * phi(i * l + a);
  return out;
}

GroundStateList ground_states(const SiteDecomposition& dec, const BondProjectors& bonds, int N, std::size_t cap) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "ground states need a chain of at least 2 sites");
  const InteractionGraph g = build_graph(bonds);
  const CycleList cycles = enumerate_cycles(g, N, cap);
  GroundStateList out;
  out.N = N;
  out.truncated = cycles.truncated;

  for (const auto& cyc : cycles.cycles) {
    std::vector<int> choice(N, 0);
    while (true) {
      if (out.states.size() >= cap) {
        out.truncated = true;
        return out;
      }
      GroundState s;
      s.cycle = cyc;
      s.kernel_choice = choice;
      bool constant = true;
      for (int j = 0; j < N; ++j) {
        const BondFactor& f = bonds(cyc[j], cyc[(j + 1) % N]);
        s.bond_vectors.push_back(f.kernel_basis.col(choice[j]));
        constant = constant && cyc[j] == cyc[0] && choice[j] == choice[0];
      }
      if (constant) s.mps = loop_mps(dec.blocks[cyc[0]], s.bond_vectors[0]);
      out.states.push_back(std::move(s));

      int j = 0;
      for (; j < N; ++j) {
        if (++choice[j] < g.M(cyc[j], cyc[(j + 1) % N])) break;
        choice[j] = 0;
      }
      if (j == N) break;
    }
  }
  return out;
}

Vector dense_state(const SiteDecomposition& dec, const GroundState& st) {
  const int N = static_cast<int>(st.cycle.size());
  const int d = dec.d;
  // Site tensor A_j^s[a, a'] = Σ_b W_{α_j}[s, a·r + b] φ_j[b·l' + a'].
  std::vector<std::vector<Matrix>> site(N);
  for (int j = 0; j < N; ++j) {
    const SiteBlock& cur = dec.blocks[st.cycle[j]];
    const SiteBlock& next = dec.blocks[st.cycle[(j + 1) % N]];
    const Vector& phi = st.bond_vectors[j];
    for (int s = 0; s < d; ++s) {
      Matrix a = Matrix::Zero(cur.l, next.l);
      for (int x = 0; x < cur.l; ++x)
        for (int y = 0; y < next.l; ++y)
          for (int b = 0; b < cur.r; ++b) a(x, y) += cur.isometry(s, x * cur.r + b) * phi(b * next.l + y);
      site[j].push_back(std::move(a));
    }
  }
  Eigen::Index total = 1;
  for (int j = 0; j < N; ++j) total *= d;
  Vector out(total);
  std::vector<Matrix> prefix(N + 1);
  prefix[0] = identity(dec.blocks[st.cycle[0]].l);
  std::function<void(int, Eigen::Index)> walk = [&](int j, Eigen::Index index) {
    if (j == N) {
      out(index) = prefix[N].trace();
      return;
    }
    for (int s = 0; s < d; ++s) {
      prefix[j + 1] = prefix[j] * site[j][s];
      walk(j + 1, index * d + s);
    }
  };
  walk(0, 0);
  const double nrm = out.norm();
  if (nrm > 0) out /= nrm;
  return out;
}

}  // namespace cchain
