#pragma once

#include "lsiib/collective_model.hpp"

namespace lsiib::cavity {

// Reference coupling that the scaling laws are anchored to.
struct Anchor {
  double g0 = 54.25;        // Gamma
  double length = 40e-6;    // m
  double diameter = 5e-6;   // m
};

struct CavityGeometry {
  double length = 0.0;                 // m
  double mode_diameter = 0.0;          // m
  double mirror_transmittivity = 0.0;  // intensity, 0 < T < 1
  int n_atoms = 1;
  Anchor anchor{};

  void validate() const;  // invalid_geometry
};

struct CavityFigures {
  double g = 0.0;             // Gamma, sqrt(N) enhanced
  double finesse = 0.0;
  double fsr = 0.0;           // Hz
  double gamma_hwhm = 0.0;    // Gamma
  double gamma_hwhm_hz = 0.0; // Hz
  double lifetime = 0.0;      // s
  double mode_volume = 0.0;   // m^3
};

CavityFigures cavity_figures(const CavityGeometry& geom);

// Single-atom vacuum Rabi frequency in Gamma units from the single-photon field.
double first_principles_g(double omega, double mode_volume, double dipole_moment);

// Dipole moment (C m) used for the cross-check: Rb D2 cycling-transition
// reduced element times sqrt(2).
inline constexpr double kRbCyclingDipole = 5.0688e-29;
inline constexpr double kRbD2Wavelength = 780.241e-9;  // m

struct Feasibility {
  double pi_time_s = 0.0;
  double lifetime_s = 0.0;
  double ratio = 0.0;  // pi_time / lifetime
  bool feasible = false;
};

Feasibility gate_feasibility(const CavityGeometry& geom, const collective::LadderParams& params);
// Same comparison against an explicit lifetime.
Feasibility gate_feasibility(double lifetime_s, const collective::LadderParams& params);

}  // namespace lsiib::cavity
