#pragma once

#include <string>
#include <vector>

#include "lsiib/hamiltonian.hpp"

// Collective-state ladder of an N-atom Lambda ensemble driven by two Raman
// legs: leg 1 (omega1) couples the all-ground manifold to the optically
// excited one and is enhanced by sqrt(N); leg 2 (omega2) couples the excited
// manifold to the c-excitation manifold. All quantities are in units of Gamma.
namespace lsiib::collective {

struct LadderParams {
  int n_atoms = 1;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  // Highest c-excitation number kept in the basis (n_max).
  int truncation = 1;
  // Append G(n_max + 1) after C(n_max); reproduces the six-level truncation
  // with its trailing G(3) row when truncation = 2.
  bool trailing_g = false;

  // Builds the leg detunings from the common detuning and the two-photon
  // detuning: delta1 = delta + Delta/2, delta2 = delta - Delta/2.
  static LadderParams from_common(int n_atoms, double omega1, double omega2, double delta,
                                  double two_photon_detuning, int truncation,
                                  bool trailing_g = false);

  double common_detuning() const noexcept { return 0.5 * (delta1 + delta2); }
  double two_photon_detuning() const noexcept { return delta1 - delta2; }

  // Throws invalid-parameter on n_atoms < 1, truncation < 1,
  // truncation > n_atoms, or negative Rabi frequencies.
  void validate() const;
};

// A(), G(n), C(n). G(n) holds one optically excited atom plus n - 1 c-atoms.
struct CollectiveLabel {
  enum class Kind { all_ground, excited, raman };
  Kind kind = Kind::all_ground;
  int n = 0;

  static CollectiveLabel all_ground() { return {Kind::all_ground, 0}; }
  static CollectiveLabel excited(int n) { return {Kind::excited, n}; }
  static CollectiveLabel raman(int n) { return {Kind::raman, n}; }

  // "A", "C1", "C2", ..., "G1", "G11", "G12", ... (G(2) is G_{1,1}).
  std::string name() const;

  friend bool operator==(const CollectiveLabel&, const CollectiveLabel&) = default;
};

// One basis state of the ladder together with its diagonal energy and the
// coupling to the next rung. leg_to_next is 1 or 2 (0 for the last rung).
struct LadderRung {
  CollectiveLabel label;
  double energy = 0.0;
  double coupling_to_next = 0.0;
  int leg_to_next = 0;
};

// The ladder in order A, G(1), C(1), G(2), C(2), ... with
//   A: Delta/2, G(n): -(delta + (n-1) Delta), C(n): -(2n-1) Delta/2,
//   C(n-1) <-> G(n): sqrt(N - n + 1) omega1 / 2, G(n) <-> C(n): sqrt(n) omega2 / 2.
std::vector<LadderRung> ladder_rungs(const LadderParams& params);

HamiltonianMatrix build_full_ladder(const LadderParams& params);

struct LightShifts {
  double eps_a = 0.0;
  double eps_c1 = 0.0;
  double eps_c2 = 0.0;
  double blockade_shift = 0.0;
  double rabi_collective = 0.0;
};

// First-order shifts, the fourth-order blockade shift
// -(omega2^4 + omega1^4) / (8 delta^3) and the collective Raman Rabi frequency
// sqrt(N) omega1 omega2 / (2 delta), all at the common detuning. Throws
// zero-detuning when delta = 0.
LightShifts light_shifts(const LadderParams& params);

// Exact shift of the ground state of a two-level system with coupling
// rabi/2 to a level detuned by `detuning` (positive detuning pushes the
// ground state up): sign(detuning) (sqrt(detuning^2 + rabi^2) - |detuning|) / 2.
double dressed_shift(double rabi, double detuning);

// Exact light shifts of A, C(1), C(2) summed leg by leg from dressed_shift,
// with leg 1 detuned by delta1 and leg 2 by delta2.
struct DressedShifts {
  double eps_a = 0.0;
  double eps_c1 = 0.0;
  double eps_c2 = 0.0;

  double balance_residual() const noexcept { return (eps_c2 - eps_c1) - (eps_c1 - eps_a); }
};

DressedShifts dressed_light_shifts(const LadderParams& params);

// Exact balance residual (eps_c2 - eps_c1) - (eps_c1 - eps_a) from dressed
// single-atom shifts. Agrees with light_shifts().blockade_shift when delta is
// large compared with omega2 and sqrt(N) omega1.
double blockade_shift_numeric(const LadderParams& params);

// The two-photon detuning that makes A <-> C(1) Raman resonant once the exact
// light shifts are included: Delta = eps_c1(Delta) - eps_a(Delta), solved by
// fixed-point iteration. Throws zero-detuning when delta = 0.
double resonant_two_photon_detuning(int n_atoms, double omega1, double omega2, double delta);

// Same params with delta1/delta2 moved so that Delta is the resonant value and
// the common detuning is unchanged.
LadderParams with_resonant_detuning(const LadderParams& params);

struct EffectiveHamiltonian {
  HamiltonianMatrix matrix;  // basis {A, C1, C2}
  bool regime_warning = false;  // delta < 10 max(omega2, sqrt(N) omega1, |Delta|)
};

// Three-level Hamiltonian on {A, C1, C2} after eliminating the excited
// manifold: diagonal eps + bare two-photon energy, couplings rabi/2 and
// sqrt(2 (N-1)/N) rabi/2.
EffectiveHamiltonian adiabatic_eliminate(const LadderParams& params);

enum class BlockadeTerm { keep, zero };

// The balanced form: resonant Delta applied and the energy zero moved to A,
// leaving [[0, R/2, 0], [R/2, 0, c], [0, c, Delta_B]]. BlockadeTerm::zero
// replaces Delta_B by 0 (control without blockade).
EffectiveHamiltonian balanced_effective(const LadderParams& params,
                                        BlockadeTerm blockade = BlockadeTerm::keep);

}  // namespace lsiib::collective
