#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lsiib {

using Complex = std::complex<double>;
using Basis = std::vector<std::string>;

// A Hermitian matrix in units of Gamma whose rows and columns carry state
// labels. Labels are plain strings so that collective ladder states ("C1")
// and protocol register states ("A|0|C1") share the same machinery.
struct HamiltonianMatrix {
  Basis basis;
  Eigen::MatrixXcd entries;

  std::size_t dim() const noexcept { return basis.size(); }

  // Throws basis-mismatch when the label is absent.
  std::size_t index_of(std::string_view label) const;
  Complex at(std::string_view row, std::string_view col) const;

  bool is_hermitian(double rel_tol = 1e-12) const;
  // Ascending; uses the Hermitian part only.
  Eigen::VectorXd eigenvalues() const;

  // Throws basis-mismatch if entries and basis disagree in size or if the
  // matrix is not Hermitian to rel_tol.
  void validate(double rel_tol = 1e-12) const;
};

}  // namespace lsiib
