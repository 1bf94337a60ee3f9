#include "lsiib/gate_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "lsiib/collective_model.hpp"
#include "lsiib/errors.hpp"
#include "lsiib/units.hpp"

namespace lsiib::protocol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Eigen::Index kLocalDim = 10;
constexpr double kLeakageTolerance = 1e-12;

Eigen::Index local_index(EnsembleLevel level, int photons) {
  return 2 * static_cast<Eigen::Index>(level) + photons;
}

Eigen::Index local_index(const LocalState& s) { return local_index(s.level, s.photons); }

std::size_t mode_subsystem_index(const RegisterState& state) {
  for (std::size_t i = 0; i < state.layout().size(); ++i) {
    const auto& n = state.layout()[i].name;
    if (n == "cavity" || n == "photon") return i;
  }
  throw Error(ErrorKind::basis_mismatch, "register has no photon-mode subsystem");
}

double probability_on(const RegisterState& state, Target target, const std::vector<LocalState>& states) {
  if (states.empty()) return 0.0;
  const auto mode = mode_subsystem_index(state);
  const auto& mode_name = state.layout()[mode].name;
  double p = 0.0;
  for (const auto& s : states) {
    p += state.joint_probability({{std::string(name(target)), std::string(name(s.level))},
                                  {mode_name, std::to_string(s.photons)}});
  }
  return p;
}

double wrap_phase(double phi) { return std::remainder(phi, 2.0 * kPi); }

// Rotation on the ensemble levels for every photon number; the fields are classical.
StepSpec rotation_spec(std::string step_name, Target target, RotationPair pair, double theta, double phase,
                       double rate, RamanChain chain) {
  const auto lower = pair == RotationPair::ground_raman ? EnsembleLevel::A : EnsembleLevel::C1;
  const auto upper = pair == RotationPair::ground_raman ? EnsembleLevel::C1 : EnsembleLevel::D1;
  StepSpec spec;
  spec.name = std::move(step_name);
  spec.target = target;
  spec.pairs = {{{lower, 0}, {upper, 0}}, {{lower, 1}, {upper, 1}}};
  spec.convention = PulseConvention::raman_rotation;
  spec.effective_rate = rate;
  spec.pulse_area = theta;
  spec.drive_phase = phase;
  spec.chain = chain;
  return spec;
}

struct Sector {
  Eigen::MatrixXcd unitary;               // over kept rungs
  std::vector<Eigen::Index> local_of_rung;  // -1 when the rung is outside the register
  std::vector<int> rung_ids;               // index into the full rung list
  double light_shift_phase = 0.0;
};

}  // namespace

std::string_view name(EnsembleLevel level) {
  switch (level) {
    case EnsembleLevel::A: return "A";
    case EnsembleLevel::S1: return "S1";
    case EnsembleLevel::B1: return "B1";
    case EnsembleLevel::C1: return "C1";
    case EnsembleLevel::D1: return "D1";
  }
  return "?";
}

std::string_view name(ProtocolMode mode) {
  switch (mode) {
    case ProtocolMode::ideal: return "ideal";
    case ProtocolMode::chain: return "chain";
    case ProtocolMode::strict: return "strict";
  }
  return "?";
}

std::string_view name(Target target) {
  switch (target) {
    case Target::ensemble_one: return "E-I";
    case Target::ensemble_two: return "E-II";
    case Target::link_q1: return "Q1";
    case Target::link_q2: return "Q2";
  }
  return "?";
}

Subsystem ensemble_subsystem(std::string subsystem_name) {
  Subsystem s{std::move(subsystem_name), {}};
  for (auto level : kEnsembleLevels) s.levels.emplace_back(name(level));
  return s;
}

Subsystem mode_subsystem(std::string subsystem_name) { return {std::move(subsystem_name), {"0", "1"}}; }

double RamanChain::effective_rate() const {
  return std::sqrt(static_cast<double>(n_atoms)) * leg1 * leg2 / (2.0 * std::abs(detuning));
}

void StepSpec::validate() const {
  if (!(effective_rate > 0.0) || !std::isfinite(effective_rate)) {
    throw Error(ErrorKind::invalid_parameter, name + ": effective_rate must be positive");
  }
  if (!(pulse_area >= 0.0)) {
    throw Error(ErrorKind::invalid_parameter, name + ": pulse_area must be non-negative");
  }
  std::vector<Eigen::Index> used;
  for (const auto& p : pairs) {
    for (const auto& s : {p.lower, p.upper}) {
      if (s.photons < 0 || s.photons > 1) {
        throw Error(ErrorKind::invalid_parameter, name + ": pair states must have 0 or 1 photons");
      }
      const auto idx = local_index(s);
      if (std::find(used.begin(), used.end(), idx) != used.end()) {
        throw Error(ErrorKind::invalid_parameter, name + ": transition pairs overlap");
      }
      used.push_back(idx);
    }
  }
}

LocalMap ideal_local_map(const StepSpec& spec) {
  spec.validate();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(kLocalDim, kLocalDim);
  const double c = std::cos(spec.pulse_area / 2.0);
  const double s = std::sin(spec.pulse_area / 2.0);
  const Complex up = std::polar(1.0, spec.drive_phase);
  const Complex i_unit(0.0, 1.0);

  for (const auto& pair : spec.pairs) {
    const auto lo = local_index(pair.lower);
    const auto hi = local_index(pair.upper);
    if (spec.convention == PulseConvention::raman_rotation) {
      m(lo, lo) = c;
      m(lo, hi) = i_unit * up * s;
      m(hi, lo) = i_unit * std::conj(up) * s;
      m(hi, hi) = c;
    } else {
      const auto src = spec.forward_from_lower ? lo : hi;
      const auto dst = spec.forward_from_lower ? hi : lo;
      m(src, src) = c;
      m(dst, dst) = c;
      m(dst, src) = up * s;
      m(src, dst) = -std::conj(up) * s;
    }
  }
  return {m, 0.0};
}

LocalMap chain_local_map(const StepSpec& spec) {
  spec.validate();
  const auto& chain = spec.chain;
  if (chain.n_atoms < 1 || !(chain.leg1 > 0.0) || !(chain.leg2 > 0.0) || chain.detuning == 0.0) {
    throw Error(ErrorKind::invalid_parameter, spec.name + ": chain mode needs n_atoms >= 1, positive legs and nonzero detuning");
  }
  const int a1 = chain.leg1_photon_change;
  const int a2 = chain.leg2_photon_change;
  for (const auto& p : spec.pairs) {
    if (p.upper.photons - p.lower.photons != a1 + a2) {
      throw Error(ErrorKind::invalid_parameter, spec.name + ": pair photon numbers inconsistent with the chain");
    }
  }

  const double duration = spec.duration();
  const int truncation = std::min(2, chain.n_atoms);
  auto rungs_at = [&](double two_photon) {
    return collective::ladder_rungs(collective::LadderParams::from_common(
        chain.n_atoms, chain.leg1, chain.leg2, chain.detuning, two_photon, truncation, true));
  };
  auto rungs = rungs_at(0.0);
  const int n_rungs = static_cast<int>(rungs.size());

  // Photon number of each rung relative to the sector's base.
  std::vector<int> rel(rungs.size());
  for (int i = 0; i < n_rungs; ++i) {
    const auto& lab = rungs[static_cast<std::size_t>(i)].label;
    using K = collective::CollectiveLabel::Kind;
    if (lab.kind == K::all_ground) rel[static_cast<std::size_t>(i)] = 0;
    else if (lab.kind == K::excited) rel[static_cast<std::size_t>(i)] = (lab.n - 1) * (a1 + a2) + a1;
    else rel[static_cast<std::size_t>(i)] = lab.n * (a1 + a2);
  }
  constexpr int kLowerRung = 0;  // A
  constexpr int kUpperRung = 2;  // C1

  auto photons_of = [&](int base, int i) { return base + rel[static_cast<std::size_t>(i)]; };
  // Contiguous rungs with non-negative photon number around the register states.
  auto kept_range = [&](int base) {
    const int start = photons_of(base, kLowerRung) >= 0 ? kLowerRung : kUpperRung;
    int lo = start, hi = start;
    while (lo > 0 && photons_of(base, lo - 1) >= 0) --lo;
    while (hi + 1 < n_rungs && photons_of(base, hi + 1) >= 0) ++hi;
    return std::pair{lo, hi};
  };
  auto coupling_in_sector = [&](int base, int i) {
    double c = rungs[static_cast<std::size_t>(i)].coupling_to_next;
    const int before = photons_of(base, i), after = photons_of(base, i + 1);
    if (before != after) c *= std::sqrt(static_cast<double>(std::max(before, after)));
    return c;
  };

  // Two-photon detuning that makes the first pair resonant inside its own
  // photon sector, with light shifts summed over the rungs actually present.
  {
    const int base = spec.pairs.front().lower.photons - rel[kLowerRung];
    const auto [lo, hi] = kept_range(base);
    auto shift = [&](int i) {
      double s = 0.0;
      const auto& r = rungs[static_cast<std::size_t>(i)];
      if (i > lo) {
        s += collective::dressed_shift(2.0 * coupling_in_sector(base, i - 1),
                                       r.energy - rungs[static_cast<std::size_t>(i - 1)].energy);
      }
      if (i < hi) {
        s += collective::dressed_shift(2.0 * coupling_in_sector(base, i),
                                       r.energy - rungs[static_cast<std::size_t>(i + 1)].energy);
      }
      return s;
    };
    double two_photon = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 200 && !converged; ++iter) {
      rungs = rungs_at(two_photon);
      const double next = shift(kUpperRung) - shift(kLowerRung);
      if (!std::isfinite(next)) break;
      converged = std::abs(next - two_photon) <= 1e-15 * std::max(1.0, std::abs(next));
      two_photon = next;
    }
    if (!converged) throw Error(ErrorKind::numerical, spec.name + ": chain resonance iteration did not converge");
    rungs = rungs_at(two_photon);
  }

  auto build_sector = [&](const TransitionPair& pair, int base) {
    auto photons = [&](int i) { return photons_of(base, i); };
    const auto [lo, hi] = kept_range(base);

    Sector sector;
    const int dim = hi - lo + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = lo; i <= hi; ++i) {
      const auto& r = rungs[static_cast<std::size_t>(i)];
      h(i - lo, i - lo) = r.energy;
      if (i < hi) {
        const double coupling = coupling_in_sector(base, i);
        h(i - lo, i - lo + 1) = coupling;
        h(i - lo + 1, i - lo) = coupling;
      }
      sector.rung_ids.push_back(i);
      Eigen::Index local = -1;
      if ((i == kLowerRung || i == kUpperRung) && photons(i) <= 1) {
        local = i == kLowerRung ? local_index(pair.lower.level, photons(i)) : local_index(pair.upper.level, photons(i));
      }
      sector.local_of_rung.push_back(local);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::numerical, spec.name + ": chain eigendecomposition failed");
    }
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();

    // Frame: the dressed energy of the register states in this sector, taken
    // as the mean of the eigenvalues carrying the most weight on them.
    std::vector<std::pair<double, Eigen::Index>> weights;
    int n_repr = 0;
    double bare = 0.0;
    for (int k = 0; k < dim; ++k) {
      if (sector.local_of_rung[static_cast<std::size_t>(k)] >= 0) {
        ++n_repr;
        if (n_repr == 1) bare = std::real(h(k, k));
      }
    }
    for (Eigen::Index e = 0; e < dim; ++e) {
      double w = 0.0;
      for (int k = 0; k < dim; ++k) {
        if (sector.local_of_rung[static_cast<std::size_t>(k)] >= 0) w += std::norm(vecs(k, e));
      }
      weights.emplace_back(w, e);
    }
    std::sort(weights.begin(), weights.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    double reference = 0.0;
    for (int k = 0; k < n_repr; ++k) reference += vals(weights[static_cast<std::size_t>(k)].second);
    reference /= std::max(n_repr, 1);

    const Eigen::VectorXcd phases = ((vals.array() - reference) * Complex(0.0, -duration)).exp();
    sector.unitary = vecs * phases.asDiagonal() * vecs.adjoint();
    sector.light_shift_phase = (reference - bare) * duration;
    return sector;
  };

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(kLocalDim, kLocalDim);
  std::map<std::tuple<int, int, int>, Sector> sectors;
  std::optional<double> primary_phase;
  double worst_phase = 0.0;

  for (auto level : kEnsembleLevels) {
    for (int n = 0; n <= 1; ++n) {
      const auto it = std::find_if(spec.pairs.begin(), spec.pairs.end(), [&](const TransitionPair& p) {
        return p.lower.level == level || p.upper.level == level;
      });
      if (it == spec.pairs.end()) continue;
      const bool is_lower = it->lower.level == level;
      const int rung = is_lower ? kLowerRung : kUpperRung;
      const int base = n - rel[static_cast<std::size_t>(rung)];
      const auto key = std::make_tuple(static_cast<int>(it->lower.level), static_cast<int>(it->upper.level), base);
      auto found = sectors.find(key);
      if (found == sectors.end()) {
        found = sectors.emplace(key, build_sector(*it, base)).first;
        const double lsp = found->second.light_shift_phase;
        if (!primary_phase && it == spec.pairs.begin()) primary_phase = lsp;
      }
      const auto& sector = found->second;

      const auto column = local_index(level, n);
      Eigen::Index source_rung = -1;
      for (std::size_t k = 0; k < sector.local_of_rung.size(); ++k) {
        if (sector.local_of_rung[k] == column) source_rung = static_cast<Eigen::Index>(k);
      }
      m.col(column).setZero();
      for (std::size_t k = 0; k < sector.local_of_rung.size(); ++k) {
        const auto row = sector.local_of_rung[k];
        if (row >= 0) m(row, column) = sector.unitary(static_cast<Eigen::Index>(k), source_rung);
      }
    }
  }
  if (primary_phase) {
    for (const auto& [key, sector] : sectors) {
      worst_phase = std::max(worst_phase, std::abs(wrap_phase(sector.light_shift_phase - *primary_phase)));
    }
  }

  // Drive phase: rephase each upper level so the chain's transfer element
  // carries the same phase as the ideal map.
  const auto ideal = ideal_local_map(spec).matrix;
  std::vector<EnsembleLevel> calibrated;
  Eigen::VectorXcd gauge = Eigen::VectorXcd::Ones(kLocalDim);
  for (const auto& pair : spec.pairs) {
    if (std::find(calibrated.begin(), calibrated.end(), pair.upper.level) != calibrated.end()) continue;
    const auto lo = local_index(pair.lower), hi = local_index(pair.upper);
    const Complex want = ideal(hi, lo), have = m(hi, lo);
    if (std::abs(want) < 1e-9 || std::abs(have) < 1e-9) continue;
    const Complex rot = std::polar(1.0, std::arg(want) - std::arg(have));
    gauge(local_index(pair.upper.level, 0)) = rot;
    gauge(local_index(pair.upper.level, 1)) = rot;
    calibrated.push_back(pair.upper.level);
  }
  m = gauge.asDiagonal() * m * gauge.conjugate().asDiagonal();
  return {m, worst_phase};
}

RegisterState prepare_rotation(const RegisterState& state, Target target, RotationPair pair, double theta,
                               double phase) {
  const auto allowed = pair == RotationPair::ground_raman
                           ? std::array{EnsembleLevel::A, EnsembleLevel::C1}
                           : std::array{EnsembleLevel::C1, EnsembleLevel::D1};
  double outside = 0.0;
  for (auto level : kEnsembleLevels) {
    if (level == allowed[0] || level == allowed[1]) continue;
    outside += state.probability(name(target), name(level));
  }
  if (outside > 1e-18) {
    throw Error(ErrorKind::precondition, std::string(name(target)) + " has amplitude " +
                                             std::to_string(std::sqrt(outside)) + " outside the rotated pair");
  }
  const auto spec = rotation_spec("rotation", target, pair, theta, phase, 1.0, {});
  return pi_pulse(state, spec, ProtocolMode::ideal);
}

RegisterState pi_pulse(const RegisterState& state, const StepSpec& spec, ProtocolMode mode,
                       PulseDiagnostics* diagnostics) {
  spec.validate();
  const auto ens = state.subsystem_index(name(spec.target));
  const auto photon_mode = mode_subsystem_index(state);

  std::vector<LocalState> watched = spec.leaves_register;
  watched.insert(watched.end(), spec.must_be_empty.begin(), spec.must_be_empty.end());
  const double prohibited = probability_on(state, spec.target, watched);
  if (mode == ProtocolMode::strict && prohibited > kLeakageTolerance) {
    throw Error(ErrorKind::protocol_violation,
                spec.name + ": probability " + std::to_string(prohibited) + " outside the designed subspace");
  }

  const auto map = mode == ProtocolMode::chain ? chain_local_map(spec) : ideal_local_map(spec);
  const std::array<std::size_t, 2> subsystems{ens, photon_mode};
  auto out = state.apply(map.matrix, subsystems);

  if (diagnostics) {
    const double lost = std::max(0.0, state.amplitudes().squaredNorm() - out.amplitudes().squaredNorm());
    diagnostics->leakage = prohibited + lost;
    diagnostics->light_shift_phase = map.light_shift_phase;
  }
  return out;
}

void CnotParameters::validate() const {
  if (n_atoms < 1) throw Error(ErrorKind::invalid_parameter, "cnot: n_atoms must be >= 1");
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_parameter, "cnot: delta must be positive");
  const std::array<std::pair<const char*, double>, 7> rates{{{"omega1", omega1},
                                                             {"omega2", omega2},
                                                             {"omega1_prime", omega1_prime},
                                                             {"omega2_prime", omega2_prime},
                                                             {"omega_i", omega_i},
                                                             {"omega_ii", omega_ii},
                                                             {"g_c", g_c}}};
  for (const auto& [key, value] : rates) {
    if (!(value > 0.0)) throw Error(ErrorKind::invalid_parameter, std::string("cnot: ") + key + " must be positive");
  }
  if (detuning_sign != 1 && detuning_sign != -1) {
    throw Error(ErrorKind::invalid_parameter, "cnot: detuning_sign must be +1 or -1");
  }
}

void InterlinkParameters::validate() const {
  if (n_atoms < 1) throw Error(ErrorKind::invalid_parameter, "interlink: n_atoms must be >= 1");
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_parameter, "interlink: delta must be positive");
  if (!(omega_read > 0.0) || !(omega_write > 0.0) || !(g_f > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "interlink: omega_read, omega_write and g_f must be positive");
  }
  if (!(transit_time >= 0.0)) throw Error(ErrorKind::invalid_parameter, "interlink: transit_time must be >= 0");
  if (detuning_sign != 1 && detuning_sign != -1) {
    throw Error(ErrorKind::invalid_parameter, "interlink: detuning_sign must be +1 or -1");
  }
}

std::vector<Subsystem> cnot_layout() {
  return {ensemble_subsystem("E-I"), mode_subsystem("cavity"), ensemble_subsystem("E-II")};
}

RegisterState cnot_target(const CnotInputs& in) {
  auto layout = cnot_layout();
  auto probe = RegisterState::unnormalized(layout, Eigen::VectorXcd::Zero(50));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(50);
  amps(static_cast<Eigen::Index>(probe.flat_index({"A", "0", "C1"}))) += in.alpha * in.xi;
  amps(static_cast<Eigen::Index>(probe.flat_index({"A", "0", "D1"}))) += in.eta * in.alpha;
  amps(static_cast<Eigen::Index>(probe.flat_index({"C1", "0", "D1"}))) += in.beta * in.xi;
  amps(static_cast<Eigen::Index>(probe.flat_index({"C1", "0", "C1"}))) += in.beta * in.eta;
  return RegisterState(std::move(layout), std::move(amps));
}

std::vector<StepSpec> cnot_transfer_steps(const CnotParameters& p) {
  p.validate();
  const double delta = p.detuning_sign * p.delta;
  using L = EnsembleLevel;

  const RamanChain load_chain{p.n_atoms, p.omega_i, p.g_c, delta, 0, +1};
  const RamanChain cavity_chain{1, p.g_c, p.omega_ii, delta, -1, 0};
  const RamanChain swap_chain{1, p.omega1_prime, p.omega2_prime, delta, 0, 0};

  std::vector<StepSpec> steps(5);

  auto& s2 = steps[0];
  s2.name = "step2-load-cavity";
  s2.target = Target::ensemble_one;
  s2.pairs = {{{L::A, 0}, {L::C1, 1}}};
  s2.forward_from_lower = true;
  s2.chain = load_chain;
  s2.leaves_register = {{L::A, 1}};
  s2.must_be_empty = {{L::C1, 1}};

  auto& s3 = steps[1];
  s3.name = "step3-unload-into-E-II";
  s3.target = Target::ensemble_two;
  s3.pairs = {{{L::C1, 1}, {L::S1, 0}}, {{L::D1, 1}, {L::B1, 0}}};
  s3.forward_from_lower = true;
  s3.chain = cavity_chain;
  s3.leaves_register = {{L::S1, 1}, {L::B1, 1}};
  s3.must_be_empty = {{L::S1, 0}, {L::B1, 0}};

  auto& s4 = steps[2];
  s4.name = "step4-swap-C1-D1";
  s4.target = Target::ensemble_two;
  s4.pairs = {{{L::C1, 0}, {L::D1, 0}}, {{L::C1, 1}, {L::D1, 1}}};
  s4.forward_from_lower = true;
  // Symmetric swap: both directions carry the factor i.
  s4.drive_phase = kPi / 2.0;
  s4.chain = swap_chain;

  auto& s5 = steps[3];
  s5.name = "step5-reload-cavity";
  s5.target = Target::ensemble_two;
  s5.pairs = s3.pairs;
  s5.forward_from_lower = false;
  // Matches the common factor i picked up by the C1/D1 terms in step 4.
  s5.drive_phase = kPi / 2.0;
  s5.chain = cavity_chain;
  s5.leaves_register = {{L::S1, 1}, {L::B1, 1}};
  s5.must_be_empty = {{L::C1, 1}, {L::D1, 1}};

  auto& s6 = steps[4];
  s6.name = "step6-unload-into-E-I";
  s6.target = Target::ensemble_one;
  s6.pairs = s2.pairs;
  s6.forward_from_lower = false;
  s6.chain = load_chain;
  s6.leaves_register = {{L::A, 1}};
  s6.must_be_empty = {{L::A, 0}};

  for (auto& s : steps) {
    s.convention = PulseConvention::transfer;
    s.pulse_area = kPi;
    s.effective_rate = s.chain.effective_rate();
  }
  return steps;
}

namespace {

void require_normalized(const char* what, Complex a, Complex b) {
  const double n = std::norm(a) + std::norm(b);
  if (std::abs(n - 1.0) > 1e-10) {
    throw Error(ErrorKind::invalid_parameter, std::string(what) + " amplitudes are not normalized (|a|^2+|b|^2 = " +
                                                  std::to_string(n) + ")");
  }
}

// Angle and phase for which the Raman rotation of the lower state gives
// a|lower> + b|upper> up to a global phase.
std::pair<double, double> rotation_for(Complex a, Complex b) {
  const double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double rel = std::abs(b) > 0.0 ? std::arg(b) - (std::abs(a) > 0.0 ? std::arg(a) : 0.0) : 0.0;
  return {theta, kPi / 2.0 - rel};
}

StepRecord record_step(const StepSpec& spec, const RegisterState& snapshot, const PulseDiagnostics& diag) {
  const double duration = spec.duration();
  return StepRecord{spec.name,        std::string(name(spec.target)),
                    spec.effective_rate, spec.pulse_area,
                    duration,         units::gamma_time_to_seconds(duration),
                    diag.leakage,     diag.light_shift_phase,
                    snapshot};
}

}  // namespace

GateReport run_cnot(const CnotInputs& in, const CnotParameters& params, ProtocolMode mode) {
  params.validate();
  require_normalized("control (alpha, beta)", in.alpha, in.beta);
  require_normalized("target (xi, eta)", in.xi, in.eta);

  const double delta = params.detuning_sign * params.delta;
  const double ground_rate = std::sqrt(static_cast<double>(params.n_atoms)) * params.omega1 * params.omega2 /
                             (2.0 * params.delta);
  const double excited_rate = params.omega1_prime * params.omega2_prime / (2.0 * params.delta);
  const RamanChain ground_chain{params.n_atoms, params.omega1, params.omega2, delta, 0, 0};
  const RamanChain excited_chain{1, params.omega1_prime, params.omega2_prime, delta, 0, 0};

  const auto [theta_control, phase_control] = rotation_for(in.alpha, in.beta);
  const auto [theta_target, phase_target] = rotation_for(in.xi, in.eta);

  std::vector<StepSpec> sequence;
  sequence.push_back(rotation_spec("step1-rotate-E-I", Target::ensemble_one, RotationPair::ground_raman,
                                   theta_control, phase_control, ground_rate, ground_chain));
  // Phase pi/2 makes the pi rotation land on +|C1>.
  sequence.push_back(rotation_spec("step1-excite-E-II", Target::ensemble_two, RotationPair::ground_raman, kPi,
                                   kPi / 2.0, ground_rate, ground_chain));
  sequence.push_back(rotation_spec("step1-rotate-E-II", Target::ensemble_two, RotationPair::excited_raman,
                                   theta_target, phase_target, excited_rate, excited_chain));
  for (auto& s : cnot_transfer_steps(params)) sequence.push_back(std::move(s));

  auto layout = cnot_layout();
  Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(5);
  ground(0) = 1.0;
  Eigen::VectorXcd vacuum = Eigen::VectorXcd::Zero(2);
  vacuum(0) = 1.0;
  const auto initial = RegisterState::product(layout, {ground, vacuum, ground});

  auto state = initial;
  std::vector<StepRecord> records;
  for (const auto& spec : sequence) {
    PulseDiagnostics diag;
    state = pi_pulse(state, spec, mode, &diag);
    records.push_back(record_step(spec, state, diag));
  }

  const auto target = cnot_target(in);
  const double fidelity = target.overlap(state);
  const double retained = state.amplitudes().squaredNorm();
  const auto final_state = state.normalized();

  return GateReport{"cnot",
                    mode,
                    {{"alpha", in.alpha}, {"beta", in.beta}, {"xi", in.xi}, {"eta", in.eta}},
                    initial,
                    final_state,
                    target,
                    fidelity,
                    retained,
                    final_state.probability("cavity", "1"),
                    std::move(records),
                    std::nullopt};
}

std::vector<Subsystem> interlink_layout(bool with_ancilla) {
  std::vector<Subsystem> layout;
  if (with_ancilla) layout.push_back({"ancilla", {"0", "1"}});
  layout.push_back(ensemble_subsystem("Q1"));
  layout.push_back(mode_subsystem("photon"));
  layout.push_back(ensemble_subsystem("Q2"));
  return layout;
}

namespace {

StepSpec link_step(std::string step_name, Target target, bool forward_from_lower, double pump,
                   const InterlinkParameters& p) {
  using L = EnsembleLevel;
  StepSpec spec;
  spec.name = std::move(step_name);
  spec.target = target;
  // The free-space photon rides on leg 1 (a-g, sqrt(N) enhanced) and is
  // absorbed when climbing it; the pump drives g-c.
  spec.pairs = {{{L::A, 1}, {L::C1, 0}}};
  spec.convention = PulseConvention::transfer;
  spec.forward_from_lower = forward_from_lower;
  spec.pulse_area = kPi;
  spec.chain = RamanChain{p.n_atoms, p.g_f, pump, p.detuning_sign * p.delta, -1, 0};
  spec.effective_rate = spec.chain.effective_rate();
  spec.leaves_register = {{L::C1, 1}};
  spec.must_be_empty = {forward_from_lower ? LocalState{L::C1, 0} : LocalState{L::A, 1}};
  return spec;
}

}  // namespace

StepSpec interlink_read_step(const InterlinkParameters& params) {
  params.validate();
  return link_step("read-Q1", Target::link_q1, false, params.omega_read, params);
}

StepSpec interlink_write_step(const InterlinkParameters& params) {
  params.validate();
  return link_step("write-Q2", Target::link_q2, true, params.omega_write, params);
}

GateReport run_interlink(Complex alpha, Complex beta, bool with_ancilla, const InterlinkParameters& params,
                         ProtocolMode mode) {
  params.validate();
  require_normalized("Q1 (alpha, beta)", alpha, beta);

  auto layout = interlink_layout(with_ancilla);
  auto probe = RegisterState::unnormalized(layout, Eigen::VectorXcd::Zero(with_ancilla ? 100 : 50));
  auto levels = [&](const char* anc, const char* q1, const char* q2) {
    std::vector<std::string> v;
    if (with_ancilla) v.emplace_back(anc);
    v.emplace_back(q1);
    v.emplace_back("0");
    v.emplace_back(q2);
    return v;
  };

  Eigen::VectorXcd init = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(probe.dim()));
  init(static_cast<Eigen::Index>(probe.flat_index(levels("0", "A", "A")))) = alpha;
  init(static_cast<Eigen::Index>(probe.flat_index(levels("1", "C1", "A")))) += beta;
  Eigen::VectorXcd goal = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(probe.dim()));
  goal(static_cast<Eigen::Index>(probe.flat_index(levels("0", "A", "A")))) = alpha;
  goal(static_cast<Eigen::Index>(probe.flat_index(levels("1", "A", "C1")))) += beta;

  const RegisterState initial(layout, init);
  const RegisterState target(layout, goal);

  const auto read = interlink_read_step(params);
  const auto write = interlink_write_step(params);

  auto state = initial;
  std::vector<StepRecord> records;
  auto run_step = [&](const StepSpec& spec) {
    const double two_photon = probability_on(state, spec.target, spec.leaves_register);
    if (two_photon > kLeakageTolerance) {
      throw Error(ErrorKind::protocol_violation,
                  spec.name + ": pulse would put a second photon into the free-space mode (probability " +
                      std::to_string(two_photon) + ")");
    }
    PulseDiagnostics diag;
    state = pi_pulse(state, spec, mode, &diag);
    records.push_back(record_step(spec, state, diag));
  };

  run_step(read);
  // Fiber transit: bookkeeping only.
  records.push_back(StepRecord{"transit", "photon", 0.0, 0.0, params.transit_time,
                               units::gamma_time_to_seconds(params.transit_time), 0.0, 0.0, state});
  run_step(write);

  const double fidelity = target.overlap(state);
  const double retained = state.amplitudes().squaredNorm();
  const auto final_state = state.normalized();

  std::optional<double> entropy;
  if (with_ancilla) {
    const std::array<std::size_t, 2> keep{final_state.subsystem_index("ancilla"), final_state.subsystem_index("Q2")};
    const Eigen::MatrixXcd rho_pair = final_state.reduced_density_matrix(keep);
    // Trace Q2 out of the pair to get the ancilla marginal.
    const Eigen::Index q2 = 5;
    Eigen::MatrixXcd rho_anc = Eigen::MatrixXcd::Zero(2, 2);
    for (Eigen::Index a = 0; a < 2; ++a) {
      for (Eigen::Index b = 0; b < 2; ++b) {
        for (Eigen::Index k = 0; k < q2; ++k) rho_anc(a, b) += rho_pair(a * q2 + k, b * q2 + k);
      }
    }
    entropy = entropy_bits(rho_anc);
  }

  return GateReport{"interlink",
                    mode,
                    {{"alpha", alpha}, {"beta", beta}},
                    initial,
                    final_state,
                    target,
                    fidelity,
                    retained,
                    final_state.probability("photon", "1"),
                    std::move(records),
                    entropy};
}

CoincidenceProbabilities coincidence_probabilities(const RegisterState& state) {
  const double cavity_one = state.probability("cavity", "1");
  if (cavity_one > 1e-9) {
    throw Error(ErrorKind::precondition,
                "coincidence verification needs an empty cavity (P(1) = " + std::to_string(cavity_one) + ")");
  }
  CoincidenceProbabilities p;
  p.p_photon1 = state.probability("E-I", "A");
  p.p_photon2 = state.probability("E-II", "C1");
  p.p_coincidence = state.joint_probability({{"E-I", "A"}, {"E-II", "C1"}});
  return p;
}

}  // namespace lsiib::protocol
