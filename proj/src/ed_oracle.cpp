#include "cchain/ed_oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cchain {

namespace {

/// Translation orbits of basis configurations.
struct Orbits {
  std::vector<Eigen::Index> rep;     // smallest index in the orbit
  std::vector<int> offset;           // T^offset rep = c
  std::vector<int> period;           // orbit length of rep
  std::vector<Eigen::Index> reps;    // all representatives, ascending
};

Eigen::Index rotate(Eigen::Index c, int d, Eigen::Index top) { return (c % d) * top + c / d; }

/// Nonzero entries of column c of H.
std::vector<std::pair<Eigen::Index, cplx>> column(const ChainHamiltonian& h, Eigen::Index c) {
  const int N = h.length(), d = h.site_dim();
  std::vector<Eigen::Index> stride(N);
  for (int j = N - 1, s = 1; j >= 0; --j, s *= d) stride[j] = s;
  std::vector<std::pair<Eigen::Index, cplx>> out;
  for (int j = 0; j < N; ++j) {
    const int k = (j + 1) % N;
    const int a = static_cast<int>((c / stride[j]) % d);
    const int b = static_cast<int>((c / stride[k]) % d);
    const Eigen::Index base = c - a * stride[j] - b * stride[k];
    for (int u = 0; u < d; ++u)
      for (int v = 0; v < d; ++v) {
        const cplx x = h.term()(u * d + v, a * d + b);
        if (x != cplx(0)) out.emplace_back(base + u * stride[j] + v * stride[k], x);
      }
  }
  return out;
}

Orbits orbits(int N, int d, Eigen::Index dim) {
  const Eigen::Index top = dim / d;
  Orbits o;
  o.rep.assign(dim, -1);
  o.offset.assign(dim, 0);
  o.period.assign(dim, 0);
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (o.rep[c] >= 0) continue;
    // c is the smallest member of its orbit since lower indices are done.
    o.reps.push_back(c);
    Eigen::Index x = c;
    int t = 0;
    do {
      o.rep[x] = c;
      o.offset[x] = t;
      x = rotate(x, d, top);
      ++t;
    } while (x != c && t < N);
    o.period[c] = t;
  }
  return o;
}

}  // namespace

ChainHamiltonian::ChainHamiltonian(int N, int d, Matrix term) : N_(N), d_(d), term_(std::move(term)) {
  dim_ = 1;
  for (int j = 0; j < N; ++j) dim_ *= d;
}

ChainHamiltonian build_chain(const Matrix& term, int d, int N, std::int64_t cap) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "chain length must be at least 2");
  if (term.rows() != Eigen::Index(d) * d || term.cols() != term.rows())
    throw Error(ErrorKind::InvalidInput, "two-site term has the wrong shape");
  double dim = 1;
  for (int j = 0; j < N; ++j) dim *= d;
  if (dim > double(cap))
    throw Error(ErrorKind::TooLarge, std::to_string(d) + "^" + std::to_string(N) + " exceeds the cap of " +
                                         std::to_string(cap));
  return ChainHamiltonian(N, d, term);
}

Vector ChainHamiltonian::apply(const Vector& x) const {
  Vector y = Vector::Zero(dim_);
  std::vector<Eigen::Index> stride(N_);
  for (int j = N_ - 1, s = 1; j >= 0; --j, s *= d_) stride[j] = s;
  for (int j = 0; j < N_; ++j) {
    const int k = (j + 1) % N_;
    for (Eigen::Index c = 0; c < dim_; ++c) {
      if (x(c) == cplx(0)) continue;
      const int a = static_cast<int>((c / stride[j]) % d_);
      const int b = static_cast<int>((c / stride[k]) % d_);
      const Eigen::Index base = c - a * stride[j] - b * stride[k];
      const int col = a * d_ + b;
      for (int u = 0; u < d_; ++u)
        for (int v = 0; v < d_; ++v) {
          const cplx h = term_(u * d_ + v, col);
          if (h != cplx(0)) y(base + u * stride[j] + v * stride[k]) += h * x(c);
        }
    }
  }
  return y;
}

Matrix ChainHamiltonian::dense() const {
  Matrix out(dim_, dim_);
  for (Eigen::Index c = 0; c < dim_; ++c) out.col(c) = apply(Vector::Unit(dim_, c));
  return out;
}

Vector ChainHamiltonian::shift(const Vector& x) const {
  const Eigen::Index top = dim_ / d_;
  Vector y(dim_);
  for (Eigen::Index c = 0; c < dim_; ++c) y(rotate(c, d_, top)) = x(c);
  return y;
}

ChainSpectrum diagonalize(const ChainHamiltonian& h, double vector_cutoff) {
  const bool vectors = vector_cutoff > -std::numeric_limits<double>::infinity();
  const int N = h.length(), d = h.site_dim();
  const Eigen::Index dim = h.dim();
  const Orbits o = orbits(N, d, dim);

  std::vector<std::vector<std::pair<Eigen::Index, cplx>>> columns(dim);
  for (Eigen::Index r : o.reps) columns[r] = column(h, r);

  std::vector<double> all;
  std::vector<std::pair<std::size_t, Vector>> vecs;
  for (int m = 0; m < N; ++m) {
    const double k = 2.0 * std::numbers::pi * m / N;
    std::vector<Eigen::Index> pos(dim, -1);
    std::vector<Eigen::Index> members;
    for (Eigen::Index r : o.reps)
      if ((m * o.period[r]) % N == 0) {
        pos[r] = static_cast<Eigen::Index>(members.size());
        members.push_back(r);
      }
    const Eigen::Index n = static_cast<Eigen::Index>(members.size());
    if (n == 0) continue;

    Matrix block = Matrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
      const Eigen::Index r = members[col];
      for (const auto& [c, x] : columns[r]) {
        const Eigen::Index rc = o.rep[c];
        if (pos[rc] < 0) continue;
        const double phase = k * o.offset[c];
        block(pos[rc], col) += x * std::polar(std::sqrt(double(o.period[r]) / o.period[rc]), phase);
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(block),
                                             vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < n; ++i) all.push_back(es.eigenvalues()(i));
    if (vectors) {
      for (Eigen::Index i = 0; i < n && es.eigenvalues()(i) < vector_cutoff; ++i) {
        Vector v = Vector::Zero(dim);
        for (Eigen::Index c = 0; c < dim; ++c) {
          const Eigen::Index rc = o.rep[c];
          if (pos[rc] < 0) continue;
          v(c) = es.eigenvectors()(pos[rc], i) * std::polar(1.0 / std::sqrt(double(o.period[rc])), -k * o.offset[c]);
        }
        vecs.emplace_back(all.size() - n + i, std::move(v));
      }
    }
  }

  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return all[a] < all[b]; });
  ChainSpectrum out;
  out.eigenvalues.resize(static_cast<Eigen::Index>(all.size()));
  for (std::size_t i = 0; i < order.size(); ++i) out.eigenvalues(Eigen::Index(i)) = all[order[i]];

  std::stable_sort(vecs.begin(), vecs.end(),
                   [&](const auto& a, const auto& b) { return all[a.first] < all[b.first]; });
  out.eigenvectors.resize(dim, static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t i = 0; i < vecs.size(); ++i) out.eigenvectors.col(Eigen::Index(i)) = vecs[i].second;
  return out;
}

KernelResult kernel(const ChainHamiltonian& h, double tol) {
  const ChainSpectrum spec = diagonalize(h, tol);
  KernelResult out;
  while (out.dim < spec.eigenvalues.size() && spec.eigenvalues(out.dim) < tol) ++out.dim;
  out.basis = spec.eigenvectors.leftCols(out.dim);
  return out;
}

std::map<int, std::int64_t> integer_spectrum(const ChainHamiltonian& h, double tol) {
  const ChainSpectrum spec = diagonalize(h);
  std::map<int, std::int64_t> out;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double e = spec.eigenvalues(i);
    const double rounded = std::round(e);
    if (std::abs(e - rounded) > tol)
      throw Error(ErrorKind::NonIntegerSpectrum, "eigenvalue " + std::to_string(e) + " is not an integer");
    ++out[static_cast<int>(rounded)];
  }
  return out;
}

bool same_subspace(const Matrix& a, const Matrix& b, double tol) {
  if (a.cols() != b.cols()) return false;
  if (a.cols() == 0) return true;
  return subspace_distance(a, b) < tol;
}

double translation_defect(const ChainHamiltonian& h, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const Vector x = random_gaussian(h.dim(), 1, rng).col(0);
    const Vector lhs = h.shift(h.apply(x));
    const Vector rhs = h.apply(h.shift(x));
    worst = std::max(worst, (lhs - rhs).norm() / x.norm());
  }
  return worst;
}

}  // namespace cchain
