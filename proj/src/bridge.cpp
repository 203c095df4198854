#include "cchain/bridge.hpp"

#include <cmath>

namespace cchain {

Matrix eq_x_defect(const Matrix& h, const Matrix& x, int d) {
  const Matrix one = identity(d);
  const Matrix hl = kron(h, one), hr = kron(one, h), mid = kron(one, x, one);
  return hl * mid * hr - hr * mid * hl;
}

XCheck verify_x(const LocalTerm& h, const Matrix& x, double tol) {
  const int d = h.site_dim();
  if (x.rows() != d || x.cols() != d) throw Error(ErrorKind::InvalidInput, "X must be d x d");
  XCheck out;
  out.residual = operator_norm(eq_x_defect(h.op(), x, d));
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues()(0);
  out.positive_definite = hermiticity_defect(x) <= tol && out.min_eigenvalue > tol;
  return out;
}

namespace {

/// Hermitian solutions of the linear constraint, orthonormal in the
/// Hilbert–Schmidt product.
std::vector<Matrix> solution_space(const LocalTerm& h, double tol) {
  const int d = h.site_dim();
  const std::vector<Matrix> basis = hermitian_basis(d);
  const Eigen::Index rows = Eigen::Index(d) * d * d * d * d * d;
  RealMatrix a(2 * rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const Matrix img = eq_x_defect(h.op(), basis[m], d);
    const Eigen::Map<const DenseVector<cplx>> v(img.data(), rows);
    a.col(Eigen::Index(m)) << v.real(), v.imag();
  }
  const RealMatrix r = Eigen::HouseholderQR<RealMatrix>(a).matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<RealMatrix> svd(r, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double thr = rank_threshold(sv.size() ? sv(0) : 0.0, tol);
  std::vector<Matrix> out;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > thr) continue;
    Matrix x = Matrix::Zero(d, d);
    for (std::size_t m = 0; m < basis.size(); ++m) x += svd.matrixV()(Eigen::Index(m), k) * basis[m];
    out.push_back(hermitian_part(x));
  }
  return out;
}

struct Scored {
  Matrix x;
  double score = -std::numeric_limits<double>::infinity();
};

Scored score(Matrix x) {
  x = hermitian_part(x);
  const double nrm = normal_operator_norm(x);
  if (nrm == 0.0) return {};
  x /= nrm;
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  // A negative-definite candidate is as good as its negation.
  if (-hi > lo) return {-x, -hi};
  return {x, lo};
}

}  // namespace

XSearch solve_x(const LocalTerm& h, double tol, std::uint64_t seed, int trials) {
  XSearch out;
  const std::vector<Matrix> sols = solution_space(h, tol);
  out.solution_dim = static_cast<int>(sols.size());
  if (sols.empty()) {
    out.note = "the constraint has no nonzero Hermitian solution";
    return out;
  }

  const int d = h.site_dim();
  Matrix id_proj = Matrix::Zero(d, d);
  for (const Matrix& s : sols) id_proj += hs_inner(s, identity(d)) * s;
  Scored best = score(id_proj);

  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < trials; ++t) {
    Matrix x = Matrix::Zero(d, d);
    for (const Matrix& s : sols) x += (coin(rng) ? 1.0 : -1.0) * s;
    Scored c = score(x);
    if (c.score > best.score) best = std::move(c);
    ++out.trials;
  }

  if (best.score > tol) {
    const XCheck check = verify_x(h, best.x, tol);
    if (check.residual <= std::sqrt(tol)) {
      out.candidate = XCandidate{best.x, check.min_eigenvalue, check.residual};
      out.note = "positive-definite solution found";
      return out;
    }
  }
  out.note = "no positive-definite solution found by the bounded search; this does not prove nonexistence";
  return out;
}

Vector apply_sitewise(const Matrix& y, const Vector& x, int N) {
  const Eigen::Index d = y.rows();
  Vector cur = x;
  Eigen::Index stride = 1;
  for (int j = N - 1; j >= 0; --j, stride *= d) {
    Vector next = Vector::Zero(cur.size());
    for (Eigen::Index c = 0; c < cur.size(); ++c) {
      if (cur(c) == cplx(0)) continue;
      const Eigen::Index s = (c / stride) % d;
      const Eigen::Index base = c - s * stride;
      for (Eigen::Index t = 0; t < d; ++t) next(base + t * stride) += y(t, s) * cur(c);
    }
    cur = std::move(next);
  }
  return cur;
}

Commutification commutify(const LocalTerm& h, const Matrix& x, double tol, int check_N, std::int64_t ed_cap) {
  const int d = h.site_dim();
  const XCheck check = verify_x(h, x, tol);
  if (!check.positive_definite)
    throw Error(ErrorKind::CommutificationFailed, "X is not positive definite (min eigenvalue " +
                                                      std::to_string(check.min_eigenvalue) + ")");
  const Matrix y = principal_sqrt(hermitian_part(x), tol);
  const Matrix yy = kron(y, y);
  LocalTerm hp(d, hermitian_part(yy * h.op() * yy), std::sqrt(tol));

  Commutification out{hp, check_commuting(projectorize(hp, tol), tol), std::nullopt};
  if (out.commutation.residual > std::sqrt(tol))
    throw Error(ErrorKind::CommutificationFailed,
                "transformed term does not commute; residual " + std::to_string(out.commutation.residual));

  double dim = 1;
  for (int j = 0; j < check_N; ++j) dim *= d;
  if (check_N >= 2 && dim <= double(ed_cap)) {
    const KernelResult k0 = kernel(build_chain(h.op(), d, check_N, ed_cap));
    const KernelResult k1 = kernel(build_chain(hp.op(), d, check_N, ed_cap));
    KernelCorrespondence kc{check_N, k0.dim, k1.dim, false};
    if (k0.dim == k1.dim) {
      Matrix mapped(k1.basis.rows(), k1.dim);
      for (int i = 0; i < k1.dim; ++i) mapped.col(i) = apply_sitewise(y, k1.basis.col(i), check_N);
      kc.same = same_subspace(range_basis(mapped, tol), k0.basis);
    }
    out.correspondence = kc;
  }
  return out;
}

InjectiveMpsMap polar_normalize(const Matrix& s_raw, double tol) {
  const Eigen::Index n = s_raw.rows();
  const int chi = static_cast<int>(std::lround(std::sqrt(double(n))));
  if (s_raw.cols() != n || Eigen::Index(chi) * chi != n || chi < 1)
    throw Error(ErrorKind::InvalidInput, "map must be square on C^{chi^2}");
  Eigen::JacobiSVD<Matrix> svd(s_raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  if (sv(n - 1) <= tol * std::max(sv(0), 1.0))
    throw Error(ErrorKind::SingularS, "map is not injective (smallest singular value " + std::to_string(sv(n - 1)) + ")");
  const Matrix& v = svd.matrixV();
  InjectiveMpsMap out;
  out.chi = chi;
  out.s = hermitian_part(v * sv.cast<cplx>().asDiagonal() * v.adjoint());
  out.phi_max = Vector::Zero(n);
  for (int i = 0; i < chi; ++i) out.phi_max(i * chi + i) = 1.0 / std::sqrt(double(chi));
  return out;
}

MpsParent mps_parent(const InjectiveMpsMap& map, double tol) {
  const int chi = map.chi;
  const Eigen::Index n = Eigen::Index(chi) * chi;
  Eigen::JacobiSVD<Matrix> svd(map.s);
  const RealVector& sv = svd.singularValues();
  if (sv(n - 1) <= tol * std::max(sv(0), 1.0)) throw Error(ErrorKind::SingularS, "map is not invertible");

  const Matrix p = identity(n * n) - kron(identity(chi), map.phi_max * map.phi_max.adjoint(), identity(chi));
  const Matrix sinv = map.s.inverse();
  const Matrix w = kron(sinv, sinv);
  return MpsParent{ProjectorTerm(static_cast<int>(n), hermitian_part(p), tol),
                   LocalTerm(static_cast<int>(n), hermitian_part(w * p * w.adjoint()), std::sqrt(tol))};
}

Matrix random_pd_map(int chi, Rng& rng, double floor) {
  const Eigen::Index n = Eigen::Index(chi) * chi;
  const Matrix g = random_gaussian(n, n, rng) / std::sqrt(double(n));
  Matrix s = g * g.adjoint() + floor * identity(n);
  return hermitian_part(s / normal_operator_norm(s));
}

}  // namespace cchain
