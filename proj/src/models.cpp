#include "cchain/models.hpp"

#include "cchain/canonical.hpp"

#include <regex>

namespace cchain::models {

namespace {

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

}  // namespace

ProjectorTerm ising() {
  Matrix p = identity(4);
  p(0, 0) = 0.0;
  p(3, 3) = 0.0;
  return ProjectorTerm(2, p);
}

ProjectorTerm fig2() {
  const Matrix xx = kron(pauli_x(), pauli_x());
  const Matrix zz = kron(pauli_z(), pauli_z());
  return ProjectorTerm(4, (identity(16) - kron(xx, zz)) / 2.0);
}

ProjectorTerm zero(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "site dimension must be positive");
  return ProjectorTerm(d, Matrix::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d));
}

ProjectorTerm by_name(const std::string& name) {
  static const std::regex zero_re(R"(zero(?::(\d+)|\((\d+)\))?)");
  static const std::regex canon_re(R"(canonical(?::(\d+),(\d+)|\((\d+),(\d+)\)))");
  std::smatch m;
  if (name == "ising") return ising();
  if (name == "fig2") return fig2();
  if (std::regex_match(name, m, zero_re)) {
    const std::string d = m[1].matched ? m[1].str() : m[2].matched ? m[2].str() : "2";
    return zero(std::stoi(d));
  }
  if (std::regex_match(name, m, canon_re)) {
    const int k = std::stoi(m[1].matched ? m[1].str() : m[3].str());
    const int d = std::stoi(m[2].matched ? m[2].str() : m[4].str());
    return canonical_hamiltonian(k, d);
  }
  throw Error(ErrorKind::InvalidInput, "unknown model '" + name + "'");
}

std::vector<std::string> builtin_names() { return {"ising", "fig2", "zero(d)", "canonical(k,d)"}; }

}  // namespace cchain::models
