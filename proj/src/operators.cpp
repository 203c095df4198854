#include "cchain/operators.hpp"

#include <string>

namespace cchain {

namespace {

void check_shape(int d, const Matrix& op) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "site dimension must be positive");
  const Eigen::Index n = Eigen::Index(d) * d;
  if (op.rows() != n || op.cols() != n)
    throw Error(ErrorKind::InvalidInput, "two-site operator must be " + std::to_string(n) + "x" +
                                             std::to_string(n) + " for d = " + std::to_string(d));
  if (!op.allFinite()) throw Error(ErrorKind::InvalidInput, "operator has non-finite entries");
}

Matrix symmetrized(const Matrix& op, double tol) {
  const double defect = hermiticity_defect(op);
  if (defect > tol)
    throw Error(ErrorKind::NotHermitian, "‖h − h†‖ = " + std::to_string(defect));
  return hermitian_part(op);
}

}  // namespace

LocalTerm::LocalTerm(int site_dim, Matrix op, double tol) : d_(site_dim) {
  check_shape(site_dim, op);
  op_ = symmetrized(op, tol);
}

ProjectorTerm::ProjectorTerm(int site_dim, Matrix op, double tol) : d_(site_dim) {
  check_shape(site_dim, op);
  op_ = symmetrized(op, tol);
  const double idem = (op_ * op_ - op_).norm();
  if (idem > std::sqrt(tol))
    throw Error(ErrorKind::InvalidInput, "operator is not a projector: ‖P² − P‖ = " + std::to_string(idem));
}

ProjectorTerm projectorize(const LocalTerm& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.op());
  const RealVector& ev = es.eigenvalues();
  if (ev.size() && ev(0) < -std::sqrt(tol))
    throw Error(ErrorKind::NotPSD, "smallest eigenvalue " + std::to_string(ev(0)) +
                                       "; shift the energy so the term is positive semidefinite");
  const double largest = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  const double thr = rank_threshold(largest, tol);
  const Eigen::Index n = ev.size();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev(i) > thr) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return ProjectorTerm(h.site_dim(), hermitian_part(p), tol);
}

CommutationCheck check_commuting(const Matrix& term, int d, double tol) {
  const Matrix left = kron(term, identity(d));
  const Matrix right = kron(identity(d), term);
  CommutationCheck out;
  out.residual = normal_operator_norm(commutator(left, right));
  out.commuting = out.residual <= tol;
  return out;
}

Matrix SchmidtPair::reconstruct() const {
  Matrix out = Matrix::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d);
  for (std::size_t k = 0; k < left.size(); ++k) out += kron(left[k], right[k]);
  return out;
}

SchmidtPair operator_schmidt(const Matrix& op, int d, double tol) {
  const std::vector<Matrix> basis = hermitian_basis(d);
  const Eigen::Index nb = static_cast<Eigen::Index>(basis.size());

  // Coefficients of op in the product basis E_m ⊗ E_n. They are real for
  // Hermitian op, so a real SVD keeps the factors Hermitian.
  Matrix reshuffled(nb, nb);
  for (int i = 0; i < d; ++i)
    for (int ip = 0; ip < d; ++ip)
      for (int j = 0; j < d; ++j)
        for (int jp = 0; jp < d; ++jp) reshuffled(i * d + ip, j * d + jp) = op(i * d + j, ip * d + jp);
  Matrix vecs(nb, nb);
  for (Eigen::Index m = 0; m < nb; ++m)
    for (int i = 0; i < d; ++i)
      for (int ip = 0; ip < d; ++ip) vecs(i * d + ip, m) = basis[m](i, ip);
  const RealMatrix coeff = (vecs.adjoint() * reshuffled * vecs.conjugate()).real();

  Eigen::JacobiSVD<RealMatrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double thr = rank_threshold(sv.size() ? sv(0) : 0.0, tol);

  SchmidtPair out;
  out.d = d;
  for (Eigen::Index k = 0; k < sv.size() && sv(k) > thr; ++k) {
    Matrix a = Matrix::Zero(d, d), b = Matrix::Zero(d, d);
    for (Eigen::Index m = 0; m < nb; ++m) {
      a += svd.matrixU()(m, k) * basis[m];
      b += svd.matrixV()(m, k) * basis[m];
    }
    out.left.push_back(sv(k) * a);
    out.right.push_back(b);
  }
  return out;
}

namespace {

void validate(const SynthesisSpec& spec) {
  const auto nv = static_cast<Eigen::Index>(spec.blocks.size());
  if (nv == 0) throw Error(ErrorKind::InvalidSpec, "no blocks");
  if (spec.kernel_dims.rows() != nv || spec.kernel_dims.cols() != nv)
    throw Error(ErrorKind::InvalidSpec, "kernel_dims must be |V|x|V|");
  for (const auto& b : spec.blocks)
    if (b.l < 1 || b.r < 1) throw Error(ErrorKind::InvalidSpec, "block dimensions must be positive");
  for (Eigen::Index a = 0; a < nv; ++a)
    for (Eigen::Index b = 0; b < nv; ++b) {
      const int k = spec.kernel_dims(a, b);
      const int cap = spec.blocks[a].r * spec.blocks[b].l;
      if (k < 0 || k > cap)
        throw Error(ErrorKind::InvalidSpec, "kernel dim " + std::to_string(k) + " at (" + std::to_string(a) +
                                                "," + std::to_string(b) + ") outside [0, " +
                                                std::to_string(cap) + "]");
    }
}

}  // namespace

ProjectorTerm synthesize_local_term(const SynthesisSpec& spec, std::uint64_t seed) {
  validate(spec);
  int d = 0;
  for (const auto& b : spec.blocks) d += b.dim();

  Rng rng(seed);
  const Matrix basis = random_unitary(d, rng);
  std::vector<Matrix> iso;
  int offset = 0;
  for (const auto& b : spec.blocks) {
    iso.push_back(basis.middleCols(offset, b.dim()));
    offset += b.dim();
  }

  const Eigen::Index n = Eigen::Index(d) * d;
  Matrix p = Matrix::Zero(n, n);
  const std::size_t nv = spec.blocks.size();
  for (std::size_t a = 0; a < nv; ++a) {
    for (std::size_t b = 0; b < nv; ++b) {
      const BlockDims& ba = spec.blocks[a];
      const BlockDims& bb = spec.blocks[b];
      const int inner = ba.r * bb.l;
      const int k = spec.kernel_dims(Eigen::Index(a), Eigen::Index(b));
      Matrix q = identity(inner);
      if (k > 0) {
        const Matrix kernel = random_isometry(inner, k, rng);
        q -= kernel * kernel.adjoint();
      }
      const Matrix local = kron(identity(ba.l), q, identity(bb.r));
      const Matrix w = kron(iso[a], iso[b]);
      p += w * local * w.adjoint();
    }
  }
  return ProjectorTerm(d, hermitian_part(p));
}

bool synthesis_is_resolvable(const SynthesisSpec& spec) {
  validate(spec);
  const auto nv = static_cast<int>(spec.blocks.size());
  const auto& K = spec.kernel_dims;
  auto generic = [&](int a, int b) {
    const int k = K(a, b);
    return k > 0 && k < spec.blocks[a].r * spec.blocks[b].l;
  };

  std::vector<bool> touched(nv, false);
  for (int b = 0; b < nv; ++b) {
    bool column_full = false, row_full = false, row_any = false;
    for (int a = 0; a < nv; ++a) {
      if (generic(a, b)) {
        touched[b] = true;
        if (spec.blocks[a].r >= 2) column_full = true;
      }
      if (generic(b, a)) {
        touched[b] = true;
        row_any = true;
        if (spec.blocks[a].l >= 2) row_full = true;
      }
    }
    // The left factor must be acted on irreducibly from the left bond.
    if (spec.blocks[b].l >= 2 && !column_full) return false;
    // The right factor is either untouched (scalar action) or irreducible.
    if (spec.blocks[b].r >= 2 && row_any && !row_full) return false;
  }

  // Blocks acted on only by trivial (0 or 1) bond projectors are
  // distinguishable only through their 0/1 patterns.
  for (int b = 0; b < nv; ++b)
    for (int c = b + 1; c < nv; ++c) {
      if (touched[b] || touched[c]) continue;
      bool differ = false;
      for (int a = 0; a < nv && !differ; ++a)
        differ = (K(a, b) == 0) != (K(a, c) == 0) || (K(b, a) == 0) != (K(c, a) == 0);
      if (!differ) return false;
    }
  return true;
}

}  // namespace cchain
