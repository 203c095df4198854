#include "cchain/graph.hpp"

#include <array>
#include <sstream>

namespace cchain {

BondProjectors extract_bond_projectors(const ProjectorTerm& p, const SiteDecomposition& dec, double tol) {
  const double limit = std::sqrt(tol);
  BondProjectors out;
  out.block_dims = dec.dims();
  const int nv = static_cast<int>(dec.size());

  std::vector<Matrix> qs;
  for (int a = 0; a < nv; ++a) {
    for (int b = 0; b < nv; ++b) {
      const SiteBlock& ba = dec.blocks[a];
      const SiteBlock& bb = dec.blocks[b];
      const Matrix w = kron(ba.isometry, bb.isometry);
      const Matrix compressed = w.adjoint() * p.op() * w;
      const std::array<int, 4> dims{ba.l, ba.r, bb.l, bb.r};
      const std::array<bool, 4> inner{false, true, true, false};
      Matrix q = hermitian_part(partial_trace(compressed, dims, inner) / double(ba.l * bb.r));
      const double defect = (compressed - kron(identity(ba.l), q, identity(bb.r))).norm();
      out.factorization_residual = std::max(out.factorization_residual, defect);
      if (defect > limit)
        throw Error(ErrorKind::FactorizationFailed, "block pair (" + std::to_string(a) + "," + std::to_string(b) +
                                                        ") does not factor as 1 ⊗ Q ⊗ 1; residual " +
                                                        std::to_string(defect));
      if ((q * q - q).norm() > limit)
        throw Error(ErrorKind::FactorizationFailed, "bond factor is not a projector");

      Eigen::SelfAdjointEigenSolver<Matrix> es(q);
      BondFactor f{a, b, q, 0, Matrix()};
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) < 0.5) ++f.kernel_dim;
      // Eigenvalues are ascending, so the kernel comes first.
      f.kernel_basis = es.eigenvectors().leftCols(f.kernel_dim);
      qs.push_back(q);
      out.factors.push_back(std::move(f));
    }
  }
  out.reconstruction_residual = (assemble_term(dec, qs) - p.op()).norm();
  if (out.reconstruction_residual > limit)
    throw Error(ErrorKind::FactorizationFailed,
                "bond factors do not reassemble the term; residual " + std::to_string(out.reconstruction_residual));
  return out;
}

Matrix assemble_term(const SiteDecomposition& dec, const std::vector<Matrix>& q) {
  const int nv = static_cast<int>(dec.size());
  const Eigen::Index n = Eigen::Index(dec.d) * dec.d;
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) {
      const SiteBlock& ba = dec.blocks[a];
      const SiteBlock& bb = dec.blocks[b];
      const Matrix w = kron(ba.isometry, bb.isometry);
      out += w * kron(identity(ba.l), q[std::size_t(a) * nv + b], identity(bb.r)) * w.adjoint();
    }
  return out;
}

InteractionGraph build_graph(const BondProjectors& bonds) {
  InteractionGraph g;
  g.num_vertices = bonds.size();
  g.block_dims = bonds.block_dims;
  g.M = Eigen::MatrixXi::Zero(g.num_vertices, g.num_vertices);
  g.R = Eigen::MatrixXi::Zero(g.num_vertices, g.num_vertices);
  for (const auto& f : bonds.factors) {
    g.M(f.from, f.to) = f.kernel_dim;
    g.R(f.from, f.to) = f.rank();
  }
  return g;
}

std::string export_dot(const InteractionGraph& g) {
  std::ostringstream os;
  os << "digraph interaction {\n";
  os << "  node [shape=circle];\n";
  for (int v = 0; v < g.num_vertices; ++v) {
    const BlockDims& b = g.block_dims[v];
    os << "  a" << v << " [label=\"α" << v << " (" << b.l << "," << b.r << ")\"];\n";
  }
  for (int a = 0; a < g.num_vertices; ++a)
    for (int b = 0; b < g.num_vertices; ++b)
      if (g.M(a, b) > 0) os << "  a" << a << " -> a" << b << " [label=\"k=" << g.M(a, b) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace cchain
