#include "lsiib/hamiltonian.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "lsiib/errors.hpp"

namespace lsiib {

std::size_t HamiltonianMatrix::index_of(std::string_view label) const {
  const auto it = std::find(basis.begin(), basis.end(), label);
  if (it == basis.end()) {
    throw Error(ErrorKind::basis_mismatch, "label '" + std::string(label) + "' not in basis");
  }
  return static_cast<std::size_t>(it - basis.begin());
}

Complex HamiltonianMatrix::at(std::string_view row, std::string_view col) const {
  return entries(static_cast<Eigen::Index>(index_of(row)), static_cast<Eigen::Index>(index_of(col)));
}

bool HamiltonianMatrix::is_hermitian(double rel_tol) const {
  if (entries.rows() != entries.cols()) return false;
  if (entries.size() == 0) return true;
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double defect = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  return defect <= rel_tol * scale;
}

Eigen::VectorXd HamiltonianMatrix::eigenvalues() const {
  const Eigen::MatrixXcd hermitian = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical, "eigenvalue solver did not converge");
  }
  return solver.eigenvalues();
}

void HamiltonianMatrix::validate(double rel_tol) const {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (entries.rows() != n || entries.cols() != n) {
    throw Error(ErrorKind::basis_mismatch, "matrix dimension " + std::to_string(entries.rows()) + "x" +
                                               std::to_string(entries.cols()) + " does not match basis of " +
                                               std::to_string(basis.size()) + " labels");
  }
  if (!is_hermitian(rel_tol)) {
    throw Error(ErrorKind::numerical, "Hamiltonian is not Hermitian");
  }
}

}  // namespace lsiib
