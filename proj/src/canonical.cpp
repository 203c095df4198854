#include "cchain/canonical.hpp"

namespace cchain {

namespace {

ScaleInvarianceVerdict require_scale_invariant(const BondProjectors& bonds) {
  ScaleInvarianceVerdict v = check_scale_invariance(build_graph(bonds));
  if (!v.scale_invariant) throw Error(ErrorKind::NotScaleInvariant, "interaction graph has non-loop cycles or heavy loops");
  return v;
}

Vector first_basis_vector(int n) { return Vector::Unit(n, 0); }

/// Unitary on span{ψ, φ} rotating φ onto ψ, identity on the complement.
/// φ is rephased first so that ⟨ψ|φ⟩ ≥ 0.
Matrix plane_rotation(const Vector& psi, Vector phi) {
  const Eigen::Index n = psi.size();
  const cplx overlap = psi.dot(phi);
  if (std::abs(overlap) > 0) phi *= std::conj(overlap) / std::abs(overlap);
  const double c = std::min(1.0, std::real(psi.dot(phi)));
  Vector w = phi - c * psi;
  const double s = w.norm();
  if (s < 1e-14) return identity(n);
  w /= s;
  const Matrix pp = psi * psi.adjoint(), ww = w * w.adjoint();
  // Basis (ψ, w): U ψ = cψ − s w, U w = sψ + c w.
  return identity(n) - pp - ww + c * (pp + ww) + s * (psi * w.adjoint() - w * psi.adjoint());
}

}  // namespace

ProjectorTerm prune_to_loops(const ProjectorTerm& p, const SiteDecomposition& dec, const BondProjectors& bonds) {
  require_scale_invariant(bonds);
  const int nv = bonds.size();
  std::vector<Matrix> q;
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) {
      const BondFactor& f = bonds(a, b);
      q.push_back(a == b && f.kernel_dim == 1 ? f.q : identity(f.q.rows()));
    }
  return ProjectorTerm(p.site_dim(), hermitian_part(assemble_term(dec, q)));
}

DisentanglerSpec disentangling_unitary(const SiteDecomposition& dec, const BondProjectors& bonds,
                                       const ReferenceChoice& refs) {
  DisentanglerSpec out;
  const Eigen::Index n = Eigen::Index(dec.d) * dec.d;
  out.u = identity(n);
  for (int a = 0; a < bonds.size(); ++a) {
    const BondFactor& f = bonds(a, a);
    if (f.kernel_dim == 0) continue;
    if (f.kernel_dim != 1)
      throw Error(ErrorKind::DegenerateLoopKernel,
                  "loop at block " + std::to_string(a) + " has kernel dimension " + std::to_string(f.kernel_dim));
    const SiteBlock& blk = dec.blocks[a];
    Vector xr = first_basis_vector(blk.r), xl = first_basis_vector(blk.l);
    if (auto it = refs.find(a); it != refs.end()) {
      xr = it->second.first.normalized();
      xl = it->second.second.normalized();
      if (xr.size() != blk.r || xl.size() != blk.l)
        throw Error(ErrorKind::InvalidInput, "reference vector size mismatch at block " + std::to_string(a));
    }
    const Matrix ua = plane_rotation(kron(xr, xl), f.kernel_basis.col(0));
    const Matrix w = kron(blk.isometry, blk.isometry);
    out.u += w * (kron(identity(blk.l), ua, identity(blk.r)) - identity(w.cols())) * w.adjoint();
    out.loops.push_back(a);
    out.xi_r.push_back(xr);
    out.xi_l.push_back(xl);
    out.local.push_back(ua);
  }
  return out;
}

ProjectorTerm conjugate(const ProjectorTerm& p, const Matrix& u, double tol) {
  return ProjectorTerm(p.site_dim(), hermitian_part(u * p.op() * u.adjoint()), tol);
}

ProjectorTerm canonical_hamiltonian(int k, int d) {
  if (d < 1 || k < 1 || k > d)
    throw Error(ErrorKind::InvalidK, "need 1 ≤ k ≤ d, got k = " + std::to_string(k) + ", d = " + std::to_string(d));
  Matrix p = identity(Eigen::Index(d) * d);
  for (int a = 0; a < k; ++a) p(a * d + a, a * d + a) = 0.0;
  return ProjectorTerm(d, p);
}

CanonicalChain canonical_chain(const ProjectorTerm& p, const SiteDecomposition& dec, const BondProjectors& bonds,
                               const ReferenceChoice& refs, double tol) {
  ProjectorTerm pruned = prune_to_loops(p, dec, bonds);
  DisentanglerSpec u = disentangling_unitary(dec, bonds, refs);
  ProjectorTerm disentangled = conjugate(pruned, u.u, tol);

  const int d = p.site_dim();
  Matrix hat = identity(Eigen::Index(d) * d);
  std::vector<Vector> states;
  for (std::size_t i = 0; i < u.loops.size(); ++i) {
    const Vector site = dec.blocks[u.loops[i]].isometry * kron(u.xi_l[i], u.xi_r[i]);
    const Vector pair = kron(site, site);
    hat -= pair * pair.adjoint();
    states.push_back(site);
  }
  return CanonicalChain{std::move(pruned), std::move(u), std::move(disentangled), std::move(states),
                        ProjectorTerm(d, hermitian_part(hat), tol)};
}

std::string to_string(PhaseStatus s) {
  switch (s) {
    case PhaseStatus::Classified: return "classified";
    case PhaseStatus::NotCommuting: return "not_commuting";
    case PhaseStatus::NotScaleInvariant: return "not_scale_invariant";
    case PhaseStatus::Frustrated: return "frustrated";
  }
  return "unknown";
}

PhaseReport classify_phase(const ProjectorTerm& p, double tol, std::uint64_t seed) {
  PhaseReport r;
  r.tol = tol;
  r.seed = seed;
  r.d = p.site_dim();
  r.conventions = {
      "two-site basis index i*d+j with i the left site",
      "block isometry column a*r+b is |a>_l (x) |b>_r",
      "the left-bond side of the site determines l; a block acted on trivially from the right is reported as (l, r) "
      "with r carrying the multiplicity",
      "bond vectors live on H_{alpha_r} (x) H_{beta_l} with index b*l+a",
      "phase equality follows from the degeneracy classification; no interpolation path is constructed",
  };

  r.commutation = check_commuting(p, tol);
  if (!r.commutation.commuting) {
    r.status = PhaseStatus::NotCommuting;
    return r;
  }
  r.decomposition = decompose_site(p, tol, seed);
  r.bonds = extract_bond_projectors(p, *r.decomposition, tol);
  r.graph = build_graph(*r.bonds);
  r.verdict = check_scale_invariance(*r.graph);
  if (!r.verdict->scale_invariant) {
    r.status = PhaseStatus::NotScaleInvariant;
    return r;
  }
  r.k = static_cast<int>(r.verdict->loops.size());
  if (*r.k == 0) {
    r.status = PhaseStatus::Frustrated;
    return r;
  }
  r.status = PhaseStatus::Classified;
  r.canonical_rep = canonical_hamiltonian(*r.k, r.d);
  return r;
}

bool same_phase(const PhaseReport& a, const PhaseReport& b) {
  return a.status == PhaseStatus::Classified && b.status == PhaseStatus::Classified && a.k == b.k;
}

}  // namespace cchain
