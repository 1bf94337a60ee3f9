#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lsiib/hamiltonian.hpp"

namespace lsiib::protocol {

struct Subsystem {
  std::string name;
  std::vector<std::string> levels;
};

// Amplitudes over the tensor product of named subsystems. The first
// subsystem is the most significant digit of the flat index, and flat labels
// join level names with '|' ("C1|0|D1").
class RegisterState {
 public:
  // Rejects amplitude vectors whose norm differs from 1 by more than 1e-10.
  RegisterState(std::vector<Subsystem> layout, Eigen::VectorXcd amplitudes);

  // Tensor product of per-subsystem factors, normalized factor by factor.
  static RegisterState product(std::vector<Subsystem> layout, const std::vector<Eigen::VectorXcd>& factors);

  // Sub-normalized states (loss out of the register) used by diagnostic propagation.
  static RegisterState unnormalized(std::vector<Subsystem> layout, Eigen::VectorXcd amplitudes);

  const std::vector<Subsystem>& layout() const noexcept { return layout_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  double norm() const { return amplitudes_.norm(); }

  std::size_t subsystem_index(std::string_view name) const;
  std::size_t level_index(std::size_t subsystem, std::string_view level) const;

  std::string label(std::size_t flat_index) const;
  Basis basis() const;
  std::size_t flat_index(const std::vector<std::string>& levels) const;
  Complex amplitude(const std::vector<std::string>& levels) const;

  // Marginal probability of one subsystem being in `level`.
  double probability(std::string_view subsystem, std::string_view level) const;
  // Joint probability that every (subsystem, level) condition holds.
  double joint_probability(const std::vector<std::pair<std::string, std::string>>& conditions) const;

  // |<this|other>|^2 with no renormalization.
  double overlap(const RegisterState& other) const;

  // Applies `op` to the ordered subsystems listed; op acts on their tensor
  // product with the first listed subsystem most significant.
  RegisterState apply(const Eigen::MatrixXcd& op, std::span<const std::size_t> subsystems) const;

  RegisterState normalized() const;

  // Density matrix of the listed subsystems after tracing out the rest.
  Eigen::MatrixXcd reduced_density_matrix(std::span<const std::size_t> keep) const;

 private:
  RegisterState(std::vector<Subsystem> layout, Eigen::VectorXcd amplitudes, bool /*unchecked*/);
  std::vector<std::size_t> digits(std::size_t flat) const;

  std::vector<Subsystem> layout_;
  std::vector<std::size_t> strides_;
  Eigen::VectorXcd amplitudes_;
};

// Von Neumann entropy in bits of a density matrix.
double entropy_bits(const Eigen::MatrixXcd& rho);

}  // namespace lsiib::protocol
