#include "lsiib/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "lsiib/errors.hpp"

namespace lsiib::dynamics {

namespace {

std::size_t find_label(const Basis& basis, std::string_view label) {
  const auto it = std::find(basis.begin(), basis.end(), label);
  if (it == basis.end()) {
    throw Error(ErrorKind::basis_mismatch, "label '" + std::string(label) + "' not in basis");
  }
  return static_cast<std::size_t>(it - basis.begin());
}

}  // namespace

QuantumState::QuantumState(Basis basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<Eigen::Index>(basis_.size()) != amplitudes_.size()) {
    throw Error(ErrorKind::basis_mismatch, "amplitude vector length does not match basis");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::invalid_parameter, "state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
  }
}

QuantumState::QuantumState(Basis basis, Eigen::VectorXcd amplitudes, bool)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {}

QuantumState QuantumState::basis_state(const Basis& basis, std::string_view label) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  amps(static_cast<Eigen::Index>(find_label(basis, label))) = 1.0;
  return QuantumState(basis, std::move(amps));
}

Complex QuantumState::amplitude(std::string_view label) const {
  return amplitudes_(static_cast<Eigen::Index>(find_label(basis_, label)));
}

double QuantumState::population(std::string_view label) const { return std::norm(amplitude(label)); }

double QuantumState::fidelity(const QuantumState& other) const {
  if (other.basis_ != basis_) {
    throw Error(ErrorKind::basis_mismatch, "fidelity between states on different bases");
  }
  return std::norm(amplitudes_.dot(other.amplitudes_));
}

HamiltonianMatrix apply_drive_phase(const HamiltonianMatrix& h, double phase) {
  if (phase == 0.0) return h;
  HamiltonianMatrix out = h;
  const Complex up = std::polar(1.0, phase);
  const Complex down = std::conj(up);
  const auto n = out.entries.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.entries(i, j) *= up;
      out.entries(j, i) *= down;
    }
  }
  return out;
}

Propagator::Propagator(const HamiltonianMatrix& h) : basis_(h.basis) {
  h.validate();
  const Eigen::MatrixXcd hermitian = 0.5 * (h.entries + h.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical, "Hermitian eigendecomposition failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd Propagator::unitary(double t) const {
  const Eigen::VectorXcd phases = (eigenvalues_ * Complex(0.0, -t)).array().exp();
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Eigen::VectorXcd Propagator::evolve(const Eigen::VectorXcd& amplitudes, double t) const {
  if (t == 0.0) return amplitudes;
  const Eigen::VectorXcd phases = (eigenvalues_ * Complex(0.0, -t)).array().exp();
  const Eigen::VectorXcd in_eigenbasis = eigenvectors_.adjoint() * amplitudes;
  return eigenvectors_ * phases.cwiseProduct(in_eigenbasis);
}

QuantumState Propagator::evolve(const QuantumState& state, double t) const {
  if (state.basis() != basis_) {
    throw Error(ErrorKind::basis_mismatch, "state basis does not match Hamiltonian basis");
  }
  Eigen::VectorXcd out = evolve(state.amplitudes(), t);
  if (std::abs(out.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::numerical, "propagation lost normalization");
  }
  return QuantumState(basis_, std::move(out), true);
}

QuantumState propagate(const QuantumState& state, const PulseSegment& segment) {
  if (segment.duration < 0.0) {
    throw Error(ErrorKind::invalid_parameter, "pulse duration must be non-negative");
  }
  if (state.basis() != segment.hamiltonian.basis) {
    throw Error(ErrorKind::basis_mismatch, "state basis does not match pulse Hamiltonian basis");
  }
  if (segment.duration == 0.0) return state;
  const Propagator prop(apply_drive_phase(segment.hamiltonian, segment.phase));
  return prop.evolve(state, segment.duration);
}

const std::vector<double>& TrajectoryRecord::series(std::string_view label) const {
  return populations[find_label(labels, label)];
}

double TrajectoryRecord::max_population(std::string_view label) const {
  const auto& s = series(label);
  return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

void TrajectoryRecord::write_csv(std::ostream& os, double time_scale) const {
  os << 't';
  for (const auto& label : labels) os << ',' << label;
  os << '\n';
  char buf[64];
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.15g", times[k] * time_scale);
    os << buf;
    for (const auto& series : populations) {
      std::snprintf(buf, sizeof buf, "%.15g", series[k]);
      os << ',' << buf;
    }
    os << '\n';
  }
}

TrajectoryRecord simulate(const HamiltonianMatrix& h, const QuantumState& initial, double duration,
                          double sample_step) {
  if (!(duration > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "duration must be positive");
  }
  if (!(sample_step > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "sample_step must be positive");
  }
  if (initial.basis() != h.basis) {
    throw Error(ErrorKind::basis_mismatch, "initial state basis does not match Hamiltonian basis");
  }
  const Propagator prop(h);

  // Samples sit at k * step exactly so that halving the step reproduces the
  // coarse grid points bit for bit.
  const auto n_steps = static_cast<std::size_t>(std::floor(duration / sample_step * (1.0 + 1e-12)));
  std::vector<double> times;
  times.reserve(n_steps + 2);
  for (std::size_t k = 0; k <= n_steps; ++k) times.push_back(static_cast<double>(k) * sample_step);
  if (duration - times.back() > 1e-9 * sample_step) times.push_back(duration);

  const auto dim = h.dim();
  std::vector<std::vector<double>> populations(dim, std::vector<double>(times.size()));
  Eigen::VectorXcd state = initial.amplitudes();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::VectorXcd psi = prop.evolve(initial.amplitudes(), times[k]);
    const double total = psi.squaredNorm();
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorKind::numerical, "population sum drifted to " + std::to_string(total));
    }
    for (std::size_t i = 0; i < dim; ++i) populations[i][k] = std::norm(psi(static_cast<Eigen::Index>(i)));
    state = psi;
  }
  return TrajectoryRecord{std::move(times), h.basis, std::move(populations), QuantumState(h.basis, state)};
}

TrajectoryRecord simulate_blockade(const collective::LadderParams& params, double duration, double sample_step,
                                   DetuningPolicy policy) {
  const auto effective =
      policy == DetuningPolicy::resonant ? collective::with_resonant_detuning(params) : params;
  const auto h = collective::build_full_ladder(effective);
  return simulate(h, QuantumState::basis_state(h.basis, "A"), duration, sample_step);
}

RabiFit fit_rabi(const TrajectoryRecord& traj, std::string_view label) {
  const auto& p = traj.series(label);
  const auto& t = traj.times;
  if (p.size() < 3) {
    throw Error(ErrorKind::fit_failure, "trajectory too short to fit");
  }
  const auto [min_it, max_it] = std::minmax_element(p.begin(), p.end());
  RabiFit fit;
  fit.contrast = *max_it - *min_it;
  if (fit.contrast < 1e-6) {
    throw Error(ErrorKind::fit_failure, "no oscillation in population of " + std::string(label) +
                                            " (contrast " + std::to_string(fit.contrast) + ")");
  }
  const double threshold = *min_it + 0.5 * fit.contrast;

  std::size_t peak = 0;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    if (p[k] >= threshold && p[k] >= p[k - 1] && p[k] > p[k + 1]) {
      peak = k;
      break;
    }
  }
  if (peak == 0) {
    throw Error(ErrorKind::fit_failure, "no interior maximum of " + std::string(label) + " within the trajectory");
  }

  // Parabola through (t-, p-), (t0, p0), (t+, p+); the grid may be
  // non-uniform at the final clipped sample.
  const double t0 = t[peak - 1], t1 = t[peak], t2 = t[peak + 1];
  const double p0 = p[peak - 1], p1 = p[peak], p2 = p[peak + 1];
  const double denom = (t0 - t1) * (t0 - t2) * (t1 - t2);
  const double a = (t2 * (p1 - p0) + t1 * (p0 - p2) + t0 * (p2 - p1)) / denom;
  const double b = (t2 * t2 * (p0 - p1) + t1 * t1 * (p2 - p0) + t0 * t0 * (p1 - p2)) / denom;
  double t_max = t1;
  if (a < 0.0) {
    t_max = std::clamp(-b / (2.0 * a), t0, t2);
  }
  fit.first_pi_time = t_max;
  fit.frequency = std::numbers::pi / t_max;
  return fit;
}

}  // namespace lsiib::dynamics
