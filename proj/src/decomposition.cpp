#include "cchain/decomposition.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <tuple>

namespace cchain {

namespace {

constexpr int kMaxAttempts = 8;
constexpr double kClusterGap = 1e-6;

Matrix vec(const Matrix& m) { return m.reshaped(m.size(), 1); }

/// Accumulates the rows of a tall linear system, keeping only its
/// triangular factor so the null space can be read off at the end.
class RowReducer {
 public:
  explicit RowReducer(Eigen::Index cols) : cols_(cols), r_(0, cols) {}

  void add(const Matrix& rows) {
    Matrix stacked(r_.rows() + rows.rows(), cols_);
    stacked << r_, rows;
    if (stacked.rows() <= 2 * cols_) {
      r_ = std::move(stacked);
      return;
    }
    Eigen::HouseholderQR<Matrix> qr(stacked);
    r_ = qr.matrixQR().topRows(cols_).triangularView<Eigen::Upper>();
  }

  Matrix null_space(double tol) const {
    if (r_.rows() == 0) return identity(cols_);
    return cchain::null_space(r_, tol);
  }

 private:
  Eigen::Index cols_;
  Matrix r_;
};

/// Gram–Schmidt accumulator over L(C^n).
class SpanBuilder {
 public:
  SpanBuilder(int n, double cutoff) : n_(n), cutoff_(cutoff) {}

  /// Products of basis elements have norm at most 1 and are not rescaled,
  /// so rounding noise in a vanishing product is not promoted to a direction.
  bool add(const Matrix& x, bool rescale = true) {
    const double norm = x.norm();
    if (norm == 0.0) return false;
    Matrix r = rescale ? Matrix(x / norm) : x;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis_) r -= hs_inner(b, r) * b;
    const double rn = r.norm();
    if (rn <= cutoff_) return false;
    basis_.push_back(r / rn);
    return true;
  }

  bool full() const { return basis_.size() >= std::size_t(n_) * n_; }
  std::vector<Matrix>& basis() { return basis_; }

 private:
  int n_;
  double cutoff_;
  std::vector<Matrix> basis_;
};

std::vector<Matrix> normalized(const std::vector<Matrix>& ops) {
  std::vector<Matrix> out;
  for (const auto& m : ops) {
    const double n = m.norm();
    if (n > 0) out.push_back(m / n);
  }
  return out;
}

/// Elements of the algebra that commute with every generator.
OperatorAlgebra center(const OperatorAlgebra& alg, std::span<const Matrix> generators, double tol) {
  const int n = alg.ambient_dim;
  const auto m = static_cast<Eigen::Index>(alg.dim());
  if (generators.empty()) return alg;
  RowReducer rows(m);
  for (const auto& g : generators) {
    Matrix block(Eigen::Index(n) * n, m);
    for (Eigen::Index i = 0; i < m; ++i) block.col(i) = vec(commutator(alg.basis[i], g));
    rows.add(block);
  }
  const Matrix coeffs = rows.null_space(tol);
  OperatorAlgebra out{n, {}};
  for (Eigen::Index k = 0; k < coeffs.cols(); ++k) {
    Matrix z = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < m; ++i) z += coeffs(i, k) * alg.basis[i];
    out.basis.push_back(z);
  }
  return out;
}

Matrix random_element(std::span<const Matrix> basis, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) {
    const double re = normal(rng);
    const double im = normal(rng);
    out += cplx(re, im) * b;
  }
  return out;
}

struct Spectrum {
  RealVector values;
  Matrix vectors;
  std::vector<Eigen::Index> starts;  // cluster boundaries
};

Spectrum clustered_spectrum(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  Spectrum s{es.eigenvalues(), es.eigenvectors(), {}};
  const double scale = std::max(s.values.cwiseAbs().maxCoeff(), 1e-300);
  s.starts = cluster_sorted(s.values / scale, kClusterGap);
  return s;
}

[[noreturn]] void fail(const std::string& why) { throw Error(ErrorKind::DecompositionFailed, why); }

/// Splits one central block (orthonormal columns v) into H_l ⊗ H_r, where
/// the compressed second-slot factors generate L(H_l) ⊗ 1.
SiteBlock factor_block(const Matrix& v, std::span<const Matrix> second_slot, double tol, Rng& rng) {
  const int n = static_cast<int>(v.cols());
  std::vector<Matrix> compressed;
  for (const auto& s : second_slot) compressed.push_back(v.adjoint() * s * v);
  const OperatorAlgebra comm = commutant_of(compressed, n, tol);

  const int r = static_cast<int>(std::lround(std::sqrt(double(comm.dim()))));
  if (r < 1 || std::size_t(r) * r != comm.dim() || n % r != 0)
    fail("block commutant has dimension " + std::to_string(comm.dim()) + " in a block of size " + std::to_string(n));
  const int l = n / r;

  SiteBlock block{l, r, Matrix(v.rows(), n)};
  if (r == 1) {
    block.isometry = v;
    return block;
  }

  // Eigenspaces of a generic element 1 ⊗ k of the commutant are the copies
  // H_l ⊗ |b⟩; a second generic element supplies the intertwiners between
  // them.
  const Spectrum ks = clustered_spectrum(random_hermitian_in(comm.basis, rng));
  if (ks.starts.size() != std::size_t(r) + 1) fail("commutant element did not separate the right factor");
  for (int b = 0; b < r; ++b)
    if (ks.starts[b + 1] - ks.starts[b] != l) fail("unequal eigenspace multiplicities inside a block");

  const Matrix y = random_element(comm.basis, rng);
  const Matrix e0 = ks.vectors.middleCols(ks.starts[0], l);
  Matrix frame(n, n);
  for (int b = 0; b < r; ++b) {
    Matrix fb;
    if (b == 0) {
      fb = e0;
    } else {
      const Matrix eb = ks.vectors.middleCols(ks.starts[b], l);
      const Matrix t = eb.adjoint() * y * e0;
      Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv(0) < kClusterGap * y.norm() || (sv(0) - sv(l - 1)) > kClusterGap * sv(0))
        fail("intertwiner between right-factor copies is degenerate");
      fb = eb * svd.matrixU() * svd.matrixV().adjoint();
    }
    for (int a = 0; a < l; ++a) frame.col(a * r + b) = fb.col(a);
  }
  block.isometry = v * frame;
  return block;
}

std::vector<long long> fingerprint(const SiteBlock& b) {
  std::vector<long long> key;
  key.push_back(b.dim());
  key.push_back(b.l);
  for (Eigen::Index i = 0; i < b.isometry.rows(); ++i)
    key.push_back(std::llround(std::abs(b.isometry(i, 0)) * 1e6));
  return key;
}

SiteDecomposition attempt(const ProjectorTerm& p, const std::vector<Matrix>& second_slot,
                          const std::vector<Matrix>& first_slot, double tol, Rng& rng) {
  const int d = p.site_dim();
  std::vector<Matrix> generators = second_slot;
  generators.insert(generators.end(), first_slot.begin(), first_slot.end());

  // Blocks are the minimal central projections of the algebra generated by
  // both families; within a block the second-slot algebra fixes H_l and any
  // leftover multiplicity is carried by H_r.
  const OperatorAlgebra joint = generate_algebra(generators, d, tol);
  const OperatorAlgebra cent = center(joint, generators, tol);
  const Spectrum zs = clustered_spectrum(random_hermitian_in(cent.basis, rng));

  SiteDecomposition dec;
  dec.d = d;
  for (std::size_t c = 0; c + 1 < zs.starts.size(); ++c) {
    const Matrix v = zs.vectors.middleCols(zs.starts[c], zs.starts[c + 1] - zs.starts[c]);
    const Matrix proj = v * v.adjoint();
    for (const auto& g : generators)
      if (commutator(proj, g).norm() > std::sqrt(tol)) fail("central element split a non-central subspace");
    dec.blocks.push_back(factor_block(v, second_slot, tol, rng));
  }

  std::stable_sort(dec.blocks.begin(), dec.blocks.end(),
                   [](const SiteBlock& a, const SiteBlock& b) { return fingerprint(a) < fingerprint(b); });
  return dec;
}

}  // namespace

Matrix OperatorAlgebra::project(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& b : basis) out += hs_inner(b, x) * b;
  return out;
}

Matrix OperatorAlgebra::stacked() const {
  Matrix out(Eigen::Index(ambient_dim) * ambient_dim, Eigen::Index(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) out.col(Eigen::Index(i)) = vec(basis[i]);
  return out;
}

OperatorAlgebra generate_algebra(std::span<const Matrix> ops, int ambient_dim, double tol) {
  // Products compound rounding error, so closure uses the looser √tol cutoff.
  SpanBuilder span(ambient_dim, std::sqrt(tol));
  span.add(identity(ambient_dim));
  for (const auto& x : ops) {
    span.add(x);
    span.add(x.adjoint());
  }
  auto& basis = span.basis();
  for (std::size_t i = 0; i < basis.size() && !span.full(); ++i) {
    for (std::size_t j = 0; j <= i && j < basis.size(); ++j) {
      const Matrix xy = basis[i] * basis[j];
      const Matrix yx = basis[j] * basis[i];
      span.add(xy, false);
      span.add(yx, false);
      if (span.full()) break;
    }
  }
  return OperatorAlgebra{ambient_dim, std::move(basis)};
}

OperatorAlgebra commutant_of(std::span<const Matrix> ops, int ambient_dim, double tol) {
  const int n = ambient_dim;
  const Eigen::Index nn = Eigen::Index(n) * n;
  OperatorAlgebra out{n, {}};
  // vec(ZA − AZ) = (Aᵀ ⊗ 1 − 1 ⊗ A) vec(Z) for column-major vec.
  RowReducer rows(nn);
  const Matrix one = identity(n);
  for (const auto& a : ops) rows.add(kron(a.transpose(), one) - kron(one, a));
  const Matrix null = rows.null_space(tol);
  for (Eigen::Index k = 0; k < null.cols(); ++k) out.basis.push_back(null.col(k).reshaped(n, n));
  return out;
}

double span_distance(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  return subspace_distance(a.stacked(), b.stacked());
}

std::vector<BlockDims> SiteDecomposition::dims() const {
  std::vector<BlockDims> out;
  for (const auto& b : blocks) out.push_back({b.l, b.r});
  return out;
}

DecompositionResiduals decomposition_residuals(const ProjectorTerm& p, const std::vector<SiteBlock>& blocks,
                                               double tol) {
  const int d = p.site_dim();
  const SchmidtPair schmidt = operator_schmidt(p, tol);
  const std::vector<Matrix> second = normalized(schmidt.right);
  const std::vector<Matrix> first = normalized(schmidt.left);

  DecompositionResiduals res;
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    const SiteBlock& ba = blocks[a];
    total += ba.isometry * ba.isometry.adjoint();
    const std::array<int, 2> dims{ba.l, ba.r};
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Matrix& wb = blocks[b].isometry;
      Matrix overlap = ba.isometry.adjoint() * wb;
      if (a == b) overlap -= identity(ba.dim());
      res.isometry = std::max(res.isometry, overlap.norm());
      if (a == b) continue;
      for (const auto& s : second) res.second_slot = std::max(res.second_slot, (ba.isometry.adjoint() * s * wb).norm());
      for (const auto& c : first) res.first_slot = std::max(res.first_slot, (ba.isometry.adjoint() * c * wb).norm());
    }
    for (const auto& s : second) {
      const Matrix blk = ba.isometry.adjoint() * s * ba.isometry;
      const std::array<bool, 2> keep_l{true, false};
      const Matrix reduced = partial_trace(blk, dims, keep_l) / double(ba.r);
      res.second_slot = std::max(res.second_slot, (blk - kron(reduced, identity(ba.r))).norm());
    }
    for (const auto& c : first) {
      const Matrix blk = ba.isometry.adjoint() * c * ba.isometry;
      const std::array<bool, 2> keep_r{false, true};
      const Matrix reduced = partial_trace(blk, dims, keep_r) / double(ba.l);
      res.first_slot = std::max(res.first_slot, (blk - kron(identity(ba.l), reduced)).norm());
    }
  }
  res.completeness = (total - identity(d)).norm();
  return res;
}

SiteDecomposition decompose_site(const ProjectorTerm& p, double tol, std::uint64_t seed) {
  const SchmidtPair schmidt = operator_schmidt(p, tol);
  const std::vector<Matrix> second = normalized(schmidt.right);
  const std::vector<Matrix> first = normalized(schmidt.left);
  const double limit = std::sqrt(tol);

  std::string last_error = "no attempt made";
  for (int k = 0; k < kMaxAttempts; ++k) {
    Rng rng(mix_seed(seed, std::uint64_t(k)));
    try {
      SiteDecomposition dec = attempt(p, second, first, tol, rng);
      dec.residuals = decomposition_residuals(p, dec.blocks, tol);
      dec.seed = seed;
      dec.attempts = k + 1;
      if (dec.residuals.second_slot > limit)
        fail("second-slot factors (left-bond action) not of the form s ⊗ 1_r; residual " +
             std::to_string(dec.residuals.second_slot));
      if (dec.residuals.first_slot > limit)
        fail("first-slot factors (right-bond action) not of the form 1_l ⊗ c; residual " +
             std::to_string(dec.residuals.first_slot));
      if (dec.residuals.isometry > limit || dec.residuals.completeness > limit)
        fail("block isometries are not a complete orthonormal frame");
      return dec;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DecompositionFailed) throw;
      last_error = e.what();
    }
  }
  throw Error(ErrorKind::DecompositionFailed,
              "gave up after " + std::to_string(kMaxAttempts) + " seeds; last failure: " + last_error);
}

}  // namespace cchain
