#include "lsiib/collective_model.hpp"

#include <algorithm>
#include <cmath>

#include "lsiib/errors.hpp"

namespace lsiib::collective {

namespace {

void require_detuning(double delta) {
  if (delta == 0.0) {
    throw Error(ErrorKind::zero_detuning, "common detuning delta is 0; light shifts diverge");
  }
}

}  // namespace

LadderParams LadderParams::from_common(int n_atoms, double omega1, double omega2, double delta,
                                       double two_photon_detuning, int truncation, bool trailing_g) {
  LadderParams p;
  p.n_atoms = n_atoms;
  p.omega1 = omega1;
  p.omega2 = omega2;
  p.delta1 = delta + 0.5 * two_photon_detuning;
  p.delta2 = delta - 0.5 * two_photon_detuning;
  p.truncation = truncation;
  p.trailing_g = trailing_g;
  return p;
}

void LadderParams::validate() const {
  if (n_atoms < 1) {
    throw Error(ErrorKind::invalid_parameter, "n_atoms must be >= 1, got " + std::to_string(n_atoms));
  }
  if (truncation < 1) {
    throw Error(ErrorKind::invalid_parameter, "truncation must be >= 1, got " + std::to_string(truncation));
  }
  if (truncation > n_atoms) {
    throw Error(ErrorKind::invalid_parameter, "truncation (" + std::to_string(truncation) +
                                                  ") exceeds n_atoms (" + std::to_string(n_atoms) + ")");
  }
  if (!(omega1 >= 0.0) || !(omega2 >= 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "Rabi frequencies must be non-negative");
  }
  if (!std::isfinite(delta1) || !std::isfinite(delta2)) {
    throw Error(ErrorKind::invalid_parameter, "detunings must be finite");
  }
}

std::string CollectiveLabel::name() const {
  switch (kind) {
    case Kind::all_ground:
      return "A";
    case Kind::raman:
      return "C" + std::to_string(n);
    case Kind::excited:
      return n == 1 ? std::string("G1") : "G1" + std::to_string(n - 1);
  }
  return "?";
}

std::vector<LadderRung> ladder_rungs(const LadderParams& params) {
  params.validate();
  const double n_atoms = params.n_atoms;
  const double delta = params.common_detuning();
  const double two_photon = params.two_photon_detuning();

  std::vector<LadderRung> rungs;
  rungs.push_back({CollectiveLabel::all_ground(), 0.5 * two_photon, 0.0, 0});

  const int last_g = params.trailing_g ? params.truncation + 1 : params.truncation;
  for (int n = 1; n <= last_g; ++n) {
    // C(n-1) -> G(n) along leg 1.
    rungs.back().coupling_to_next = std::sqrt(n_atoms - n + 1) * params.omega1 / 2.0;
    rungs.back().leg_to_next = 1;
    rungs.push_back({CollectiveLabel::excited(n), -(delta + (n - 1) * two_photon), 0.0, 0});
    if (n > params.truncation) break;
    // G(n) -> C(n) along leg 2.
    rungs.back().coupling_to_next = std::sqrt(static_cast<double>(n)) * params.omega2 / 2.0;
    rungs.back().leg_to_next = 2;
    rungs.push_back({CollectiveLabel::raman(n), -(2.0 * n - 1.0) * two_photon / 2.0, 0.0, 0});
  }
  return rungs;
}

HamiltonianMatrix build_full_ladder(const LadderParams& params) {
  const auto rungs = ladder_rungs(params);
  const auto dim = static_cast<Eigen::Index>(rungs.size());

  HamiltonianMatrix h;
  h.basis.reserve(rungs.size());
  h.entries = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& rung = rungs[static_cast<std::size_t>(i)];
    h.basis.push_back(rung.label.name());
    h.entries(i, i) = rung.energy;
    if (i + 1 < dim) {
      h.entries(i, i + 1) = rung.coupling_to_next;
      h.entries(i + 1, i) = rung.coupling_to_next;
    }
  }
  return h;
}

LightShifts light_shifts(const LadderParams& params) {
  const double delta = params.common_detuning();
  require_detuning(delta);
  const double n = params.n_atoms;
  const double o1sq = params.omega1 * params.omega1;
  const double o2sq = params.omega2 * params.omega2;

  LightShifts s;
  s.eps_a = n * o1sq / (4.0 * delta);
  s.eps_c1 = (o2sq + (n - 1.0) * o1sq) / (4.0 * delta);
  s.eps_c2 = (2.0 * o2sq + (n - 2.0) * o1sq) / (4.0 * delta);
  s.blockade_shift = -(o2sq * o2sq + o1sq * o1sq) / (8.0 * delta * delta * delta);
  s.rabi_collective = std::sqrt(n) * params.omega1 * params.omega2 / (2.0 * delta);
  return s;
}

double dressed_shift(double rabi, double detuning) {
  if (rabi == 0.0) return 0.0;
  const double mag = std::abs(detuning);
  // rabi^2 / (2 (sqrt(d^2 + rabi^2) + |d|)) avoids the cancellation in
  // sqrt(d^2 + rabi^2) - |d| for rabi << |d|.
  const double shift = rabi * rabi / (2.0 * (std::hypot(detuning, rabi) + mag));
  return detuning < 0.0 ? -shift : shift;
}

DressedShifts dressed_light_shifts(const LadderParams& params) {
  const double n = params.n_atoms;
  const double d1 = params.delta1;
  const double d2 = params.delta2;
  const double o1 = params.omega1;
  const double o2 = params.omega2;

  DressedShifts s;
  s.eps_a = dressed_shift(std::sqrt(n) * o1, d1);
  s.eps_c1 = dressed_shift(o2, d2) + dressed_shift(std::sqrt(std::max(n - 1.0, 0.0)) * o1, d1);
  s.eps_c2 = dressed_shift(std::sqrt(2.0) * o2, d2) + dressed_shift(std::sqrt(std::max(n - 2.0, 0.0)) * o1, d1);
  return s;
}

double blockade_shift_numeric(const LadderParams& params) {
  params.validate();
  return dressed_light_shifts(params).balance_residual();
}

double resonant_two_photon_detuning(int n_atoms, double omega1, double omega2, double delta) {
  require_detuning(delta);
  auto params = LadderParams::from_common(n_atoms, omega1, omega2, delta, 0.0, 1);
  params.validate();

  double two_photon = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    params.delta1 = delta + 0.5 * two_photon;
    params.delta2 = delta - 0.5 * two_photon;
    const auto s = dressed_light_shifts(params);
    const double next = s.eps_c1 - s.eps_a;
    if (!std::isfinite(next)) break;
    if (std::abs(next - two_photon) <= 1e-15 * std::max(1.0, std::abs(next))) {
      return next;
    }
    two_photon = next;
  }
  throw Error(ErrorKind::numerical, "resonant two-photon detuning iteration did not converge");
}

LadderParams with_resonant_detuning(const LadderParams& params) {
  const double delta = params.common_detuning();
  const double two_photon = resonant_two_photon_detuning(params.n_atoms, params.omega1, params.omega2, delta);
  auto out = params;
  out.delta1 = delta + 0.5 * two_photon;
  out.delta2 = delta - 0.5 * two_photon;
  return out;
}

EffectiveHamiltonian adiabatic_eliminate(const LadderParams& params) {
  params.validate();
  const double delta = params.common_detuning();
  require_detuning(delta);

  const double n = params.n_atoms;
  const double two_photon = params.two_photon_detuning();
  const auto shifts = dressed_light_shifts(params);
  const double rabi = light_shifts(params).rabi_collective;
  const double upper = std::sqrt(2.0 * (n - 1.0) / n) * rabi / 2.0;

  EffectiveHamiltonian eff;
  eff.matrix.basis = {"A", "C1", "C2"};
  eff.matrix.entries = Eigen::MatrixXcd::Zero(3, 3);
  auto& m = eff.matrix.entries;
  m(0, 0) = shifts.eps_a + two_photon / 2.0;
  m(1, 1) = shifts.eps_c1 - two_photon / 2.0;
  m(2, 2) = shifts.eps_c2 - 3.0 * two_photon / 2.0;
  m(0, 1) = m(1, 0) = rabi / 2.0;
  m(1, 2) = m(2, 1) = upper;

  const double scale = std::max({params.omega2, std::sqrt(n) * params.omega1, std::abs(two_photon)});
  eff.regime_warning = std::abs(delta) < 10.0 * scale;
  return eff;
}

EffectiveHamiltonian balanced_effective(const LadderParams& params, BlockadeTerm blockade) {
  auto eff = adiabatic_eliminate(with_resonant_detuning(params));
  auto& m = eff.matrix.entries;
  const Complex zero_point = m(0, 0);
  for (Eigen::Index i = 0; i < 3; ++i) m(i, i) -= zero_point;
  if (blockade == BlockadeTerm::zero) m(2, 2) = 0.0;
  return eff;
}

}  // namespace lsiib::collective
