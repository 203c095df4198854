#pragma once

#include "cchain/operators.hpp"

#include <cstdint>
#include <limits>
#include <map>

namespace cchain {

inline constexpr std::int64_t kDefaultEdCap = 4096;
inline constexpr double kKernelTol = 1e-8;

/// H_N = Σ_j P_{j,j+1} on a periodic chain, site 0 most significant in the
/// basis index. The wraparound term acts on sites (N−1, 0).
class ChainHamiltonian {
 public:
  ChainHamiltonian(int N, int d, Matrix term);

  int length() const noexcept { return N_; }
  int site_dim() const noexcept { return d_; }
  Eigen::Index dim() const noexcept { return dim_; }
  const Matrix& term() const noexcept { return term_; }

  /// y = H x without forming H.
  Vector apply(const Vector& x) const;

  Matrix dense() const;

  /// y = T x for the cyclic shift T moving site j to site j+1.
  Vector shift(const Vector& x) const;

 private:
  int N_;
  int d_;
  Eigen::Index dim_;
  Matrix term_;
};

/// Throws TooLarge when d^N exceeds cap.
ChainHamiltonian build_chain(const Matrix& term, int d, int N, std::int64_t cap = kDefaultEdCap);

template <typename Term>
ChainHamiltonian build_chain(const Term& t, int N, std::int64_t cap = kDefaultEdCap) {
  return build_chain(t.op(), t.site_dim(), N, cap);
}

/// Full spectrum, exploiting translation invariance: H is diagonalized
/// separately in each momentum sector with a dense solver.
struct ChainSpectrum {
  RealVector eigenvalues;  ///< ascending
  Matrix eigenvectors;     ///< for the eigenvalues below the requested cutoff
};

ChainSpectrum diagonalize(const ChainHamiltonian& h,
                          double vector_cutoff = -std::numeric_limits<double>::infinity());

struct KernelResult {
  int dim = 0;
  Matrix basis;  ///< orthonormal columns
};

/// Eigenvectors with eigenvalue below tol (absolute).
KernelResult kernel(const ChainHamiltonian& h, double tol = kKernelTol);

/// Eigenvalue multiplicities after rounding to integers. Throws
/// NonIntegerSpectrum when some eigenvalue is more than tol from an integer.
std::map<int, std::int64_t> integer_spectrum(const ChainHamiltonian& h, double tol = 1e-6);

/// Equal dimensions and largest principal angle below tol.
bool same_subspace(const Matrix& a, const Matrix& b, double tol = 1e-8);

/// max over a few random vectors of ‖T H T† x − H x‖ / ‖x‖.
double translation_defect(const ChainHamiltonian& h, std::uint64_t seed = 0);

}  // namespace cchain
