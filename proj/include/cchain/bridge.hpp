#pragma once

#include "cchain/ed_oracle.hpp"

#include <optional>
#include <string>

namespace cchain {

/// (h⊗1)(1⊗X⊗1)(1⊗h) − (1⊗h)(1⊗X⊗1)(h⊗1) on C^{d³}. Linear in X.
Matrix eq_x_defect(const Matrix& h, const Matrix& x, int d);

struct XCheck {
  double residual = 0.0;  ///< operator norm of the defect
  double min_eigenvalue = 0.0;
  bool positive_definite = false;

  bool passes(double tol) const { return positive_definite && residual <= tol; }
};

XCheck verify_x(const LocalTerm& h, const Matrix& x, double tol = kDefaultTol);

struct XCandidate {
  Matrix x;  ///< Hermitian, unit operator norm
  double min_eigenvalue = 0.0;
  double residual = 0.0;
};

struct XSearch {
  std::optional<XCandidate> candidate;
  int solution_dim = 0;  ///< dimension of the Hermitian solution space
  int trials = 0;
  std::string note;

  bool found() const noexcept { return candidate.has_value(); }
};

inline constexpr int kXSearchTrials = 200;

/// Looks for a positive-definite solution of the intertwining constraint in
/// its Hermitian solution space: the projection of the identity first, then
/// seeded random sign mixtures of the solution basis. Not finding one does
/// not prove that none exists.
XSearch solve_x(const LocalTerm& h, double tol = kDefaultTol, std::uint64_t seed = 0,
                int trials = kXSearchTrials);

struct KernelCorrespondence {
  int N = 0;
  int dim_original = 0;
  int dim_transformed = 0;
  bool same = false;  ///< X^{1/2}⊗N maps ker H′_N onto ker H_N
};

struct Commutification {
  LocalTerm h_prime;
  CommutationCheck commutation;  ///< of projectorize(h_prime)
  std::optional<KernelCorrespondence> correspondence;
};

/// h′ = (X^{1/2} ⊗ X^{1/2}) h (X^{1/2} ⊗ X^{1/2}). Throws
/// CommutificationFailed when X is not positive definite or h′ does not
/// commute at √tol. The ground-space correspondence is checked on a chain of
/// length check_N when it fits under ed_cap.
Commutification commutify(const LocalTerm& h, const Matrix& x, double tol = kDefaultTol, int check_N = 3,
                          std::int64_t ed_cap = kDefaultEdCap);

/// Positive sitewise map S on C^{χ²} (site layout l·χ + r).
struct InjectiveMpsMap {
  int chi = 0;
  Matrix s;
  Vector phi_max;  ///< Σ_i |ii⟩ / √χ
};

/// Positive factor of the polar decomposition of s_raw. Throws SingularS.
InjectiveMpsMap polar_normalize(const Matrix& s_raw, double tol = kDefaultTol);

struct MpsParent {
  ProjectorTerm p;  ///< 1 − 1 ⊗ |Φ⟩⟨Φ| ⊗ 1 on (l_j, r_j, l_{j+1}, r_{j+1})
  LocalTerm h;      ///< (S⁻¹ ⊗ S⁻¹) P (S⁻¹ ⊗ S⁻¹)
};

MpsParent mps_parent(const InjectiveMpsMap& map, double tol = kDefaultTol);

/// Seeded Hermitian positive-definite map on C^{χ²} with condition number
/// bounded by roughly 1 + 4/floor.
Matrix random_pd_map(int chi, Rng& rng, double floor = 0.5);

/// (y ⊗ ⋯ ⊗ y) x on (C^d)^{⊗N}.
Vector apply_sitewise(const Matrix& y, const Vector& x, int N);

}  // namespace cchain
