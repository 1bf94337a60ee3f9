#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lsiib/collective_model.hpp"
#include "lsiib/hamiltonian.hpp"

namespace lsiib::dynamics {

// Normalized amplitude vector over a labeled basis. Construction rejects
// vectors whose norm differs from 1 by more than 1e-10.
class QuantumState {
 public:
  QuantumState(Basis basis, Eigen::VectorXcd amplitudes);

  static QuantumState basis_state(const Basis& basis, std::string_view label);

  const Basis& basis() const noexcept { return basis_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

  Complex amplitude(std::string_view label) const;
  double population(std::string_view label) const;
  double norm() const { return amplitudes_.norm(); }

  // |<this|other>|^2; global phase never matters.
  double fidelity(const QuantumState& other) const;

 private:
  QuantumState(Basis basis, Eigen::VectorXcd amplitudes, bool /*unchecked*/);
  friend class Propagator;

  Basis basis_;
  Eigen::VectorXcd amplitudes_;
};

struct PulseSegment {
  HamiltonianMatrix hamiltonian;
  double duration = 0.0;  // 1/Gamma
  double phase = 0.0;     // radians, multiplies upper off-diagonal couplings by e^{i phase}
};

// Returns H with every coupling above the diagonal multiplied by e^{i phase}
// and the lower triangle by e^{-i phase}.
HamiltonianMatrix apply_drive_phase(const HamiltonianMatrix& h, double phase);

// exp(-i H t) from one Hermitian eigendecomposition, reused for any t.
class Propagator {
 public:
  explicit Propagator(const HamiltonianMatrix& h);

  const Basis& basis() const noexcept { return basis_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

  Eigen::MatrixXcd unitary(double t) const;
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& amplitudes, double t) const;
  // Throws basis-mismatch if the state basis differs from the Hamiltonian's.
  QuantumState evolve(const QuantumState& state, double t) const;

 private:
  Basis basis_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

QuantumState propagate(const QuantumState& state, const PulseSegment& segment);

struct TrajectoryRecord {
  std::vector<double> times;  // 1/Gamma
  Basis labels;
  std::vector<std::vector<double>> populations;  // populations[label][sample]
  QuantumState final_state;

  const std::vector<double>& series(std::string_view label) const;
  double max_population(std::string_view label) const;

  // Header "t,<label>,...", one row per sample, 15 significant digits. Times
  // are multiplied by time_scale (1 for 1/Gamma units, 1/Gamma_SI for seconds).
  void write_csv(std::ostream& os, double time_scale = 1.0) const;
};

// Evolves `initial` under a constant Hamiltonian and records populations on
// the grid 0, step, 2 step, ... up to and including `duration` (the last
// sample is clipped to `duration` when it does not fall on the grid).
TrajectoryRecord simulate(const HamiltonianMatrix& h, const QuantumState& initial, double duration,
                          double sample_step);

enum class DetuningPolicy {
  resonant,  // Delta = exact eps_c1 - eps_a at the common detuning
  as_given,  // keep params.delta1 / params.delta2
};

// Evolves |A> under the full ladder for `duration`.
TrajectoryRecord simulate_blockade(const collective::LadderParams& params, double duration,
                                   double sample_step, DetuningPolicy policy = DetuningPolicy::resonant);

struct RabiFit {
  double frequency = 0.0;       // Gamma
  double contrast = 0.0;        // max - min of the population
  double first_pi_time = 0.0;   // 1/Gamma
};

// Locates the first significant maximum of a population (at least half the
// contrast above the minimum), refines it with a parabola through the three
// samples around it, and reports frequency = pi / t_max. Throws fit-failure
// when the contrast is below 1e-6 or no interior maximum exists.
RabiFit fit_rabi(const TrajectoryRecord& traj, std::string_view label);

}  // namespace lsiib::dynamics
