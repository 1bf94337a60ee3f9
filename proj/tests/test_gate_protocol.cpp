#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lsiib/errors.hpp"
#include "lsiib/gate_protocol.hpp"
#include "oracles.hpp"

using namespace lsiib;
using namespace lsiib::protocol;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRoot = 1.0 / std::sqrt(2.0);

CnotParameters gate_params() {
  CnotParameters p;
  p.n_atoms = 1225;
  p.delta = 1000.0;
  p.omega1 = 1e-3;
  p.omega2 = 100.0;
  p.omega1_prime = 10.0;
  p.omega2_prime = 10.0;
  p.omega_i = 10.0;
  p.omega_ii = 10.0;
  p.g_c = 54.25;
  return p;
}

// Pump weak enough that the cavity load itself stays blockaded.
CnotParameters chain_params() {
  auto p = gate_params();
  p.omega_i = 1e-4;
  p.g_c = 100.0;
  return p;
}

InterlinkParameters link_params() {
  InterlinkParameters p;
  p.n_atoms = 1225;
  p.delta = 1000.0;
  p.omega_read = 10.0;
  p.omega_write = 10.0;
  p.g_f = 1.0;
  return p;
}

RegisterState cnot_register(const char* e1, const char* photons, const char* e2) {
  auto layout = cnot_layout();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(50);
  const auto probe = RegisterState::unnormalized(layout, v);
  v(static_cast<Eigen::Index>(probe.flat_index({e1, photons, e2}))) = 1.0;
  return RegisterState(layout, v);
}

double fidelity_against_oracle(const GateReport& r, Complex a, Complex b, Complex x, Complex e) {
  Complex overlap = 0.0;
  for (const auto& [label, amp] : oracle::cnot_expected(a, b, x, e)) {
    const auto bar = label.find('|');
    const auto bar2 = label.rfind('|');
    overlap += std::conj(amp) *
               r.final_state.amplitude({label.substr(0, bar), label.substr(bar + 1, bar2 - bar - 1), label.substr(bar2 + 1)});
  }
  return std::norm(overlap);
}

}  // namespace

TEST(Rotation, ProducesRequestedSuperposition) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto [a, b] = oracle::random_qubit(rng);
    const double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
    const double phi = kPi / 2.0 - (std::arg(b) - std::arg(a));
    const auto out = prepare_rotation(cnot_register("A", "0", "A"), Target::ensemble_one, RotationPair::ground_raman,
                                      theta, phi);
    const auto ra = out.amplitude({"A", "0", "A"});
    const auto rc = out.amplitude({"C1", "0", "A"});
    EXPECT_NEAR(std::abs(rc / ra - b / a), 0.0, 1e-10);
  }
}

TEST(Rotation, RejectsAmplitudeOutsidePair) {
  try {
    prepare_rotation(cnot_register("S1", "0", "A"), Target::ensemble_one, RotationPair::ground_raman, kPi, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(PiPulse, TransferConventionSigns) {
  const auto steps = cnot_transfer_steps(gate_params());
  const auto& load = steps[0];
  const auto loaded = pi_pulse(cnot_register("A", "0", "A"), load);
  EXPECT_NEAR(std::abs(loaded.amplitude({"C1", "1", "A"}) - Complex(1.0, 0.0)), 0.0, 1e-15);
  // Running the forward map on the destination sends it back with -e^{-i phi}.
  auto reverse = load;
  reverse.must_be_empty.clear();
  const auto back = pi_pulse(cnot_register("C1", "1", "A"), reverse);
  EXPECT_NEAR(std::abs(back.amplitude({"A", "0", "A"}) - Complex(-1.0, 0.0)), 0.0, 1e-15);
}

TEST(PiPulse, SwapStepPutsFactorIOnBothDirections) {
  const auto swap = cnot_transfer_steps(gate_params())[2];
  const auto from_c = pi_pulse(cnot_register("A", "0", "C1"), swap);
  const auto from_d = pi_pulse(cnot_register("A", "0", "D1"), swap);
  EXPECT_NEAR(std::abs(from_c.amplitude({"A", "0", "D1"}) - Complex(0.0, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(from_d.amplitude({"A", "0", "C1"}) - Complex(0.0, 1.0)), 0.0, 1e-15);
}

TEST(PiPulse, StrictModeRejectsOccupiedDestination) {
  const auto load = cnot_transfer_steps(gate_params())[0];
  const auto occupied = cnot_register("C1", "1", "A");
  try {
    pi_pulse(occupied, load, ProtocolMode::strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::protocol_violation);
  }
  PulseDiagnostics diag;
  pi_pulse(occupied, load, ProtocolMode::ideal, &diag);
  EXPECT_NEAR(diag.leakage, 1.0, 1e-15);
}

TEST(PiPulse, OverlappingPairsAreRejected) {
  StepSpec spec;
  spec.name = "bad";
  spec.effective_rate = 1.0;
  spec.pulse_area = kPi;
  spec.pairs = {{{EnsembleLevel::A, 0}, {EnsembleLevel::C1, 0}}, {{EnsembleLevel::C1, 0}, {EnsembleLevel::D1, 0}}};
  EXPECT_THROW(spec.validate(), Error);
}

TEST(Cnot, TruthTable) {
  const struct {
    const char* control;
    const char* target;
    const char* out_control;
    const char* out_target;
  } rows[] = {{"A", "C1", "A", "C1"}, {"A", "D1", "A", "D1"}, {"C1", "C1", "C1", "D1"}, {"C1", "D1", "C1", "C1"}};
  for (const auto& row : rows) {
    CnotInputs in;
    in.alpha = std::string(row.control) == "A" ? 1.0 : 0.0;
    in.beta = 1.0 - in.alpha;
    in.xi = std::string(row.target) == "C1" ? 1.0 : 0.0;
    in.eta = 1.0 - in.xi;
    for (auto mode : {ProtocolMode::ideal, ProtocolMode::strict}) {
      const auto r = run_cnot(in, gate_params(), mode);
      EXPECT_NEAR(std::norm(r.final_state.amplitude({row.out_control, "0", row.out_target})), 1.0, 1e-12)
          << row.control << "," << row.target;
      EXPECT_GE(r.fidelity_vs_target, 1.0 - 1e-12);
    }
  }
}

TEST(Cnot, RandomInputsMatchOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto [a, b] = oracle::random_qubit(rng);
    const auto [x, e] = oracle::random_qubit(rng);
    const auto r = run_cnot({a, b, x, e}, gate_params());
    EXPECT_GE(fidelity_against_oracle(r, a, b, x, e), 1.0 - 1e-12);
    EXPECT_GE(r.fidelity_vs_target, 1.0 - 1e-12);
    EXPECT_NEAR(r.mode_excitation, 0.0, 1e-24);
  }
}

TEST(Cnot, BellCaseAndCoincidence) {
  const auto r = run_cnot({kRoot, kRoot, 1.0, 0.0}, gate_params());
  EXPECT_NEAR(std::norm(r.final_state.amplitude({"A", "0", "C1"})), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(r.final_state.amplitude({"C1", "0", "D1"})), 0.5, 1e-12);
  const auto c = coincidence_probabilities(r.final_state);
  EXPECT_NEAR(c.p_coincidence, 0.5, 1e-12);
  EXPECT_NEAR(c.p_photon1, 0.5, 1e-12);
  EXPECT_NEAR(c.p_photon2, 0.5, 1e-12);
  EXPECT_EQ(r.steps.size(), 8u);
  for (const auto& s : r.steps) EXPECT_LT(s.leakage, 1e-30) << s.name;
}

TEST(Cnot, StepDurationsFollowEffectiveRates) {
  const auto p = gate_params();
  const auto steps = cnot_transfer_steps(p);
  EXPECT_NEAR(steps[0].duration(), kPi / (35.0 * 10.0 * 54.25 / 2000.0), 1e-12);
  EXPECT_NEAR(steps[1].duration(), kPi / (10.0 * 54.25 / 2000.0), 1e-10);
  EXPECT_NEAR(steps[2].duration(), kPi / (100.0 / 2000.0), 1e-10);
}

TEST(Cnot, UnnormalizedInputsAreRejected) {
  EXPECT_THROW(run_cnot({1.0, 1.0, 1.0, 0.0}, gate_params()), Error);
}

TEST(Cnot, ChainModeReportsLossAndStaysClose) {
  const auto r = run_cnot({kRoot, kRoot, 1.0, 0.0}, chain_params(), ProtocolMode::chain);
  EXPECT_LT(r.retained_norm, 1.0);
  EXPECT_GT(r.fidelity_vs_target, 0.9);
  EXPECT_LE(r.fidelity_vs_target, r.retained_norm + 1e-12);
  double total = 0.0;
  for (const auto& s : r.steps) total += s.leakage;
  EXPECT_GT(total, 0.0);
}

TEST(Coincidence, RequiresEmptyCavity) {
  try {
    coincidence_probabilities(cnot_register("C1", "1", "A"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(ChainMap, ClassicalSwapApproachesIdealMap) {
  const auto swap = cnot_transfer_steps(gate_params())[2];
  const auto chain = chain_local_map(swap).matrix;
  const auto ideal = ideal_local_map(swap).matrix;
  EXPECT_LT((chain - ideal).norm(), 1e-2);
}

TEST(ChainMap, IsContraction) {
  for (const auto& step : cnot_transfer_steps(chain_params())) {
    const auto m = chain_local_map(step).matrix;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    EXPECT_LE(svd.singularValues().maxCoeff(), 1.0 + 1e-10) << step.name;
  }
}

TEST(Interlink, TransfersStateExactly) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto [a, b] = oracle::random_qubit(rng);
    for (auto mode : {ProtocolMode::ideal, ProtocolMode::strict}) {
      const auto r = run_interlink(a, b, false, link_params(), mode);
      EXPECT_GE(r.fidelity_vs_target, 1.0 - 1e-12);
      EXPECT_NEAR(std::abs(r.final_state.amplitude({"A", "0", "C1"}) - b), 0.0, 1e-12);
      EXPECT_NEAR(r.mode_excitation, 0.0, 1e-24);
    }
  }
}

TEST(Interlink, AncillaEntanglementMovesToQ2) {
  const auto r = run_interlink(kRoot, kRoot, true, link_params());
  EXPECT_GE(r.fidelity_vs_target, 1.0 - 1e-12);
  ASSERT_TRUE(r.entanglement_entropy.has_value());
  EXPECT_NEAR(*r.entanglement_entropy, 1.0, 1e-9);
  EXPECT_EQ(r.steps.size(), 3u);
  EXPECT_EQ(r.steps[1].name, "transit");
}

TEST(Interlink, ReadPulseRefusesSecondPhoton) {
  const auto read = interlink_read_step(link_params());
  auto layout = interlink_layout(false);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(50);
  const auto probe = RegisterState::unnormalized(layout, v);
  v(static_cast<Eigen::Index>(probe.flat_index({"C1", "1", "A"}))) = 1.0;
  try {
    pi_pulse(RegisterState(layout, v), read, ProtocolMode::strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::protocol_violation);
  }
}

TEST(Interlink, ChainModeKeepsMostOfTheState) {
  const auto r = run_interlink(kRoot, kRoot, true, link_params(), ProtocolMode::chain);
  EXPECT_LE(r.retained_norm, 1.0 + 1e-12);
  EXPECT_GT(r.fidelity_vs_target, 0.5);
}
