#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lsiib/register_state.hpp"

// Ensemble C-NOT (six steps through a shared cavity mode), the inter-computer
// photon link, and the coincidence observable, executed on explicit
// ensemble x photon-mode x ensemble registers.
namespace lsiib::protocol {

// Single-excitation collective states of one ensemble; A is the all-ground state.
enum class EnsembleLevel { A, S1, B1, C1, D1 };

inline constexpr std::array<EnsembleLevel, 5> kEnsembleLevels = {
    EnsembleLevel::A, EnsembleLevel::S1, EnsembleLevel::B1, EnsembleLevel::C1, EnsembleLevel::D1};

std::string_view name(EnsembleLevel level);
Subsystem ensemble_subsystem(std::string name);
Subsystem mode_subsystem(std::string name);  // Fock {0, 1}

enum class ProtocolMode {
  ideal,   // exact subspace maps; would-be leakage is recorded
  chain,   // physical Raman chains propagated per sector; diagnostic
  strict,  // exact maps; would-be leakage is an error
};

std::string_view name(ProtocolMode mode);

enum class Target { ensemble_one, ensemble_two, link_q1, link_q2 };

// Subsystem names used in registers: "E-I", "E-II", "Q1", "Q2".
std::string_view name(Target target);

// One ensemble level together with the photon number of the shared mode.
struct LocalState {
  EnsembleLevel level = EnsembleLevel::A;
  int photons = 0;

  friend bool operator==(const LocalState&, const LocalState&) = default;
};

// Two states coupled by a Raman pulse. `lower` is the leg-1 side of the
// physical chain (the collective ground side for sqrt(N)-enhanced pulses).
struct TransitionPair {
  LocalState lower;
  LocalState upper;
};

// Physical three-level chain behind a pulse, used only in chain mode.
struct RamanChain {
  int n_atoms = 1;              // sqrt(N) enhancement of leg 1 when > 1
  double leg1 = 0.0;            // Gamma
  double leg2 = 0.0;            // Gamma
  double detuning = 0.0;        // common detuning; sign selects the side of the excited level
  int leg1_photon_change = 0;   // photons added when climbing leg 1
  int leg2_photon_change = 0;   // photons added when climbing leg 2

  double effective_rate() const;  // sqrt(N) leg1 leg2 / (2 |detuning|)
};

enum class PulseConvention {
  // prepare_rotation: [[c, i e^{i phi} s], [i e^{-i phi} s, c]] on (lower, upper).
  raman_rotation,
  // pi_pulse: forward source -> e^{i phi} destination, destination -> -e^{-i phi} source.
  transfer,
};

struct StepSpec {
  std::string name;
  Target target = Target::ensemble_one;
  std::vector<TransitionPair> pairs;
  PulseConvention convention = PulseConvention::transfer;
  bool forward_from_lower = true;
  double effective_rate = 0.0;  // Gamma
  double pulse_area = 0.0;      // radians
  double drive_phase = 0.0;     // radians
  RamanChain chain;
  // States the couplings would carry out of the register (multi-photon etc.).
  std::vector<LocalState> leaves_register;
  // States that must hold no amplitude before the pulse for it to act as designed.
  std::vector<LocalState> must_be_empty;

  double duration() const { return pulse_area / effective_rate; }  // 1/Gamma
  void validate() const;
};

struct StepRecord {
  std::string name;
  std::string target;
  double effective_rate = 0.0;
  double pulse_area = 0.0;
  double duration = 0.0;          // 1/Gamma
  double duration_seconds = 0.0;
  double leakage = 0.0;
  double light_shift_phase = 0.0; // chain mode only
  RegisterState snapshot;
};

struct PulseDiagnostics {
  double leakage = 0.0;
  double light_shift_phase = 0.0;
};

// Ensemble label pair rotated by prepare_rotation.
enum class RotationPair {
  ground_raman,   // A <-> C1 (collective, blockaded)
  excited_raman,  // C1 <-> D1
};

// Raman rotation of `target` on the chosen pair by angle theta. Throws
// precondition when the target carries amplitude outside the pair (> 1e-9).
RegisterState prepare_rotation(const RegisterState& state, Target target, RotationPair pair, double theta,
                               double phase);

// Applies one protocol pulse. In ideal mode amplitude found on
// leaves_register / must_be_empty states is reported through `diagnostics`;
// strict mode throws protocol-violation instead. Chain mode propagates
// spec.chain sector by sector and reports lost norm as leakage.
RegisterState pi_pulse(const RegisterState& state, const StepSpec& spec, ProtocolMode mode = ProtocolMode::ideal,
                       PulseDiagnostics* diagnostics = nullptr);

// The 10x10 map on (ensemble level, photons) that a step applies, index
// 2 * level + photons. Chain mode returns a contraction (loss) rather than a unitary.
struct LocalMap {
  Eigen::MatrixXcd matrix;
  double light_shift_phase = 0.0;
};
LocalMap ideal_local_map(const StepSpec& spec);
LocalMap chain_local_map(const StepSpec& spec);

struct GateReport {
  std::string protocol;
  ProtocolMode mode = ProtocolMode::ideal;
  std::vector<std::pair<std::string, Complex>> inputs;
  RegisterState initial_state;
  RegisterState final_state;  // normalized
  RegisterState target_state;
  double fidelity_vs_target = 0.0;  // |<target|final>|^2 before renormalization
  double retained_norm = 1.0;       // 1 - total probability lost from the register
  double mode_excitation = 0.0;     // P(photon mode = 1) at the end
  std::vector<StepRecord> steps;
  std::optional<double> entanglement_entropy;  // bits, interlink with ancilla
};

// Physical couplings fixing the step timings (and the chains in chain mode).
struct CnotParameters {
  int n_atoms = 0;
  double delta = 0.0;
  double omega1 = 0.0;        // collective rotation, leg 1 (a-g)
  double omega2 = 0.0;        // collective rotation, leg 2 (g-c)
  double omega1_prime = 0.0;  // C1 <-> D1 rotation legs
  double omega2_prime = 0.0;
  double omega_i = 0.0;       // E-I pump for the cavity transfer
  double omega_ii = 0.0;      // E-II pump for the cavity transfer
  double g_c = 0.0;           // cavity vacuum Rabi frequency
  int detuning_sign = 1;

  void validate() const;
};

struct CnotInputs {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  Complex xi{1.0, 0.0};
  Complex eta{0.0, 0.0};
};

std::vector<Subsystem> cnot_layout();

// alpha xi |A,0,C1> + eta alpha |A,0,D1> + beta xi |C1,0,D1> + beta eta |C1,0,C1>.
RegisterState cnot_target(const CnotInputs& in);

// Steps 2-6 in order: cavity load from E-I, unload into E-II, C1<->D1 swap,
// partial reload, unload into E-I.
std::vector<StepSpec> cnot_transfer_steps(const CnotParameters& params);

GateReport run_cnot(const CnotInputs& in, const CnotParameters& params, ProtocolMode mode = ProtocolMode::ideal);

struct InterlinkParameters {
  int n_atoms = 0;
  double delta = 0.0;
  double omega_read = 0.0;   // pump on the sending ensemble
  double omega_write = 0.0;  // pump on the receiving ensemble
  double g_f = 0.0;          // free-space mode vacuum Rabi frequency
  double transit_time = 0.0; // 1/Gamma, bookkeeping only
  int detuning_sign = 1;

  void validate() const;
};

std::vector<Subsystem> interlink_layout(bool with_ancilla);
StepSpec interlink_read_step(const InterlinkParameters& params);
StepSpec interlink_write_step(const InterlinkParameters& params);

// Q1 = alpha|A> + beta|C1> (or alpha|0,A> + beta|1,C1> with the ancilla),
// photon |0>, Q2 = |A>. Throws protocol-violation if any pulse would put a
// second photon into the free-space mode.
GateReport run_interlink(Complex alpha, Complex beta, bool with_ancilla, const InterlinkParameters& params,
                         ProtocolMode mode = ProtocolMode::ideal);

struct CoincidenceProbabilities {
  double p_photon1 = 0.0;      // E-I in A
  double p_photon2 = 0.0;      // E-II in C1
  double p_coincidence = 0.0;  // both
};

// Requires the cavity in |0> (precondition error otherwise, tolerance 1e-9).
CoincidenceProbabilities coincidence_probabilities(const RegisterState& state);

}  // namespace lsiib::protocol
