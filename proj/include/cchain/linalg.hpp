#pragma once

// Dense linear-algebra helpers shared by every module. Everything is a thin
// layer over Eigen; functions take Eigen expressions and return plain dense
// matrices so callers can keep composing.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cchain {

using cplx = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<cplx>;
using Vector = DenseVector<cplx>;
using RealMatrix = DenseMatrix<double>;
using RealVector = DenseVector<double>;

/// Seeded generator used throughout; all randomness is explicit.
using Rng = std::mt19937_64;

/// Kronecker product a ⊗ b; the first factor is the slow index.
template <typename DA, typename DB>
DenseMatrix<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a,
                                      const Eigen::MatrixBase<DB>& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  DenseMatrix<typename DA::Scalar> out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

template <typename DA, typename DB, typename DC>
DenseMatrix<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a,
                                      const Eigen::MatrixBase<DB>& b,
                                      const Eigen::MatrixBase<DC>& c) {
  return kron(kron(a, b), c);
}

template <typename Scalar = cplx>
DenseMatrix<Scalar> identity(Eigen::Index n) {
  return DenseMatrix<Scalar>::Identity(n, n);
}

template <typename DA, typename DB>
DenseMatrix<typename DA::Scalar> commutator(const Eigen::MatrixBase<DA>& a,
                                            const Eigen::MatrixBase<DB>& b) {
  return a * b - b * a;
}

/// Hilbert–Schmidt inner product Tr(a† b).
template <typename DA, typename DB>
typename DA::Scalar hs_inner(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return a.conjugate().cwiseProduct(b).sum();
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).norm();
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()) / typename Derived::RealScalar(2);
}

/// Spectral norm (largest singular value).
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<DenseMatrix<typename Derived::Scalar>> svd(m.eval());
  return svd.singularValues()(0);
}

/// Spectral norm of a normal matrix whose eigenvalues are real up to a
/// common factor of i (Hermitian or anti-Hermitian input).
template <typename Derived>
double normal_operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  DenseMatrix<typename Derived::Scalar> h = m;
  if (hermiticity_defect(h) > (h + h.adjoint()).norm()) h *= cplx(0, 1);
  h = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<DenseMatrix<typename Derived::Scalar>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Scale-relative zero threshold: tol × max(largest singular value, 1).
inline double rank_threshold(double largest, double tol) {
  return tol * std::max(largest, 1.0);
}

/// Orthonormal basis of the right null space {x : A x = 0}.
Matrix null_space(const Matrix& a, double tol);

/// Orthonormal basis of the column space of A.
Matrix range_basis(const Matrix& a, double tol);

/// Hermitian basis of L(C^d), orthonormal in the Hilbert–Schmidt product
/// (normalized generalized Gell-Mann matrices, identity first).
std::vector<Matrix> hermitian_basis(int d);

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
Matrix random_unitary(Eigen::Index n, Rng& rng);

/// n×k matrix with orthonormal columns, Haar-distributed.
Matrix random_isometry(Eigen::Index n, Eigen::Index k, Rng& rng);

/// Random Hermitian element of span(basis) with Gaussian coefficients.
Matrix random_hermitian_in(std::span<const Matrix> basis, Rng& rng);

/// Principal square root of a Hermitian PSD matrix; eigenvalues below floor
/// are clamped to floor.
Matrix principal_sqrt(const Matrix& x, double floor);

/// Partial trace of an operator on ⊗_k C^{dims[k]}; slots with keep[k]
/// false are traced out.
Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const bool> keep);

/// Swap the two tensor factors of an operator on C^d ⊗ C^d.
Matrix swap_sites(const Matrix& m, int d);

/// Split sorted values into maximal runs whose consecutive gaps are ≤ gap.
/// Returns the run start indices followed by the total size.
std::vector<Eigen::Index> cluster_sorted(const RealVector& sorted_values, double gap);

/// Sine of the largest principal angle between span(a) and span(b)
/// (orthonormal columns, equal column counts).
double subspace_distance(const Matrix& a, const Matrix& b);

/// Derive a child seed from a parent seed and a stream index.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cchain
