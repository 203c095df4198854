#include "cchain/linalg.hpp"

#include <numeric>
#include <stdexcept>

namespace cchain {

Matrix null_space(const Matrix& a, double tol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) return identity(n);

  // Tall stacks are reduced to their n×n triangular factor first; the
  // singular values and right singular vectors are unchanged.
  Matrix work;
  if (a.rows() > 2 * n) {
    Eigen::HouseholderQR<Matrix> qr(a);
    work = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  } else {
    work = a;
  }
  Eigen::JacobiSVD<Matrix> svd(work, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv.size() ? sv(0) : 0.0, tol);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > thr) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Matrix range_basis(const Matrix& a, double tol) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv(0), tol);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > thr) ++rank;
  return svd.matrixU().leftCols(rank);
}

std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  basis.push_back(identity(d) / std::sqrt(double(d)));
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = sym(k, j) = s;
      basis.push_back(sym);
      Matrix asym = Matrix::Zero(d, d);
      asym(j, k) = cplx(0, -s);
      asym(k, j) = cplx(0, s);
      basis.push_back(asym);
    }
  }
  for (int l = 1; l < d; ++l) {
    Matrix diag = Matrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -double(l) * norm;
    basis.push_back(diag);
  }
  return basis;
}

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

Matrix random_isometry(Eigen::Index n, Eigen::Index k, Rng& rng) {
  if (k > n) throw std::invalid_argument("random_isometry: k > n");
  Matrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * identity(n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q.leftCols(k);
}

Matrix random_unitary(Eigen::Index n, Rng& rng) { return random_isometry(n, n, rng); }

Matrix random_hermitian_in(std::span<const Matrix> basis, Rng& rng) {
  if (basis.empty()) throw std::invalid_argument("random_hermitian_in: empty basis");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) {
    const double re = normal(rng);
    const double im = normal(rng);
    out += cplx(re, im) * b;
  }
  return hermitian_part(out);
}

Matrix principal_sqrt(const Matrix& x, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(x));
  RealVector roots = es.eigenvalues().cwiseMax(floor).cwiseSqrt();
  return es.eigenvectors() * roots.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const bool> keep) {
  if (dims.size() != keep.size()) throw std::invalid_argument("partial_trace: dims/keep mismatch");
  const int slots = static_cast<int>(dims.size());
  Eigen::Index total = 1, kept = 1;
  for (int k = 0; k < slots; ++k) {
    total *= dims[k];
    if (keep[k]) kept *= dims[k];
  }
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("partial_trace: operator size does not match dims");

  std::vector<Eigen::Index> kept_index(total), traced_index(total);
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index rem = i, ki = 0, ti = 0, kstride = 1, tstride = 1;
    for (int k = slots - 1; k >= 0; --k) {
      const Eigen::Index digit = rem % dims[k];
      rem /= dims[k];
      if (keep[k]) {
        ki += digit * kstride;
        kstride *= dims[k];
      } else {
        ti += digit * tstride;
        tstride *= dims[k];
      }
    }
    kept_index[i] = ki;
    traced_index[i] = ti;
  }
  Matrix out = Matrix::Zero(kept, kept);
  for (Eigen::Index c = 0; c < total; ++c)
    for (Eigen::Index r = 0; r < total; ++r)
      if (traced_index[r] == traced_index[c]) out(kept_index[r], kept_index[c]) += m(r, c);
  return out;
}

Matrix swap_sites(const Matrix& m, int d) {
  const Eigen::Index n = Eigen::Index(d) * d;
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("swap_sites: size mismatch");
  Matrix out(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out(i * d + j, k * d + l) = m(j * d + i, l * d + k);
  return out;
}

std::vector<Eigen::Index> cluster_sorted(const RealVector& sorted_values, double gap) {
  std::vector<Eigen::Index> starts;
  if (sorted_values.size() == 0) return {0};
  starts.push_back(0);
  for (Eigen::Index i = 1; i < sorted_values.size(); ++i)
    if (sorted_values(i) - sorted_values(i - 1) > gap) starts.push_back(i);
  starts.push_back(sorted_values.size());
  return starts;
}

double subspace_distance(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) return 1.0;
  if (a.cols() == 0) return 0.0;
  const Matrix residual = b - a * (a.adjoint() * b);
  return std::min(1.0, operator_norm(residual));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace cchain
