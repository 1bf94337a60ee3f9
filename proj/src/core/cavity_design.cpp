#include "lsiib/cavity_design.hpp"

#include <cmath>
#include <string>

#include "lsiib/errors.hpp"
#include "lsiib/units.hpp"

namespace lsiib::cavity {

namespace {

void require_positive(const char* what, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::invalid_geometry, std::string(what) + " must be positive (got " + std::to_string(v) + ")");
  }
}

}  // namespace

void CavityGeometry::validate() const {
  require_positive("length", length);
  require_positive("mode_diameter", mode_diameter);
  if (!(mirror_transmittivity > 0.0) || !(mirror_transmittivity < 1.0)) {
    throw Error(ErrorKind::invalid_geometry,
                "mirror_transmittivity must lie in (0, 1) (got " + std::to_string(mirror_transmittivity) + ")");
  }
  if (n_atoms < 1) throw Error(ErrorKind::invalid_geometry, "n_atoms must be >= 1");
  require_positive("anchor.g0", anchor.g0);
  require_positive("anchor.length", anchor.length);
  require_positive("anchor.diameter", anchor.diameter);
}

CavityFigures cavity_figures(const CavityGeometry& geom) {
  geom.validate();
  CavityFigures f;
  f.mode_volume = units::kPi / 4.0 * geom.mode_diameter * geom.mode_diameter * geom.length;
  f.g = geom.anchor.g0 * (geom.anchor.diameter / geom.mode_diameter) * std::sqrt(geom.anchor.length / geom.length) *
        std::sqrt(static_cast<double>(geom.n_atoms));
  f.finesse = units::kPi / geom.mirror_transmittivity;
  f.fsr = units::kSpeedOfLight / (2.0 * geom.length);
  f.gamma_hwhm_hz = f.fsr / (2.0 * f.finesse);
  f.gamma_hwhm = units::hz_to_gamma(f.gamma_hwhm_hz);
  f.lifetime = 1.0 / (2.0 * units::kPi * f.gamma_hwhm_hz);
  return f;
}

double first_principles_g(double omega, double mode_volume, double dipole_moment) {
  if (!(omega > 0.0) || !(mode_volume > 0.0) || !(dipole_moment > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "first_principles_g needs positive omega, mode_volume and dipole_moment");
  }
  const double field = std::sqrt(2.0 * units::kHbar * omega / (units::kVacuumPermittivity * mode_volume));
  return dipole_moment * field / (2.0 * units::kHbar) / units::kGammaSI;
}

Feasibility gate_feasibility(double lifetime_s, const collective::LadderParams& params) {
  params.validate();
  if (!(lifetime_s > 0.0)) throw Error(ErrorKind::invalid_parameter, "lifetime must be positive");
  const double delta = params.common_detuning();
  if (delta == 0.0) throw Error(ErrorKind::zero_detuning, "gate_feasibility needs a nonzero common detuning");
  const double rabi =
      std::sqrt(static_cast<double>(params.n_atoms)) * params.omega1 * params.omega2 / (2.0 * std::abs(delta));
  if (!(rabi > 0.0)) throw Error(ErrorKind::invalid_parameter, "collective Raman Rabi frequency is zero");
  Feasibility out;
  out.pi_time_s = units::gamma_time_to_seconds(units::kPi / rabi);
  out.lifetime_s = lifetime_s;
  out.ratio = out.pi_time_s / lifetime_s;
  out.feasible = out.pi_time_s < lifetime_s;
  return out;
}

Feasibility gate_feasibility(const CavityGeometry& geom, const collective::LadderParams& params) {
  return gate_feasibility(cavity_figures(geom).lifetime, params);
}

}  // namespace lsiib::cavity
