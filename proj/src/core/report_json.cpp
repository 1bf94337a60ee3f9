#include "report_json.hpp"

#include <cmath>

#include "lsiib/units.hpp"

namespace lsiib::report {

Json complex_pair(lsiib::Complex z) { return Json::array({z.real(), z.imag()}); }

Json state_json(const protocol::RegisterState& state) {
  Json layout = Json::array();
  for (const auto& s : state.layout()) layout.push_back({{"name", s.name}, {"levels", s.levels}});
  Json amps = Json::object();
  for (std::size_t k = 0; k < state.dim(); ++k) {
    const auto a = state.amplitudes()(static_cast<Eigen::Index>(k));
    if (std::norm(a) > 1e-24) amps[state.label(k)] = complex_pair(a);
  }
  return {{"layout", layout}, {"amplitudes", amps}};
}

Json ladder_json(const collective::LadderParams& p) {
  return {{"n_atoms", p.n_atoms},
          {"omega1", p.omega1},
          {"omega2", p.omega2},
          {"delta", p.common_detuning()},
          {"two_photon_detuning", p.two_photon_detuning()},
          {"delta1", p.delta1},
          {"delta2", p.delta2},
          {"truncation", p.truncation},
          {"trailing_g", p.trailing_g}};
}

Json light_shifts_json(const collective::LightShifts& s) {
  return {{"eps_a", s.eps_a},
          {"eps_c1", s.eps_c1},
          {"eps_c2", s.eps_c2},
          {"blockade_shift", s.blockade_shift},
          {"rabi_collective", s.rabi_collective}};
}

Json dressed_shifts_json(const collective::DressedShifts& s) {
  return {{"eps_a", s.eps_a}, {"eps_c1", s.eps_c1}, {"eps_c2", s.eps_c2}, {"balance_residual", s.balance_residual()}};
}

Json cavity_json(const cavity::CavityGeometry& geom, const cavity::CavityFigures& f) {
  return {{"geometry",
           {{"length_m", geom.length},
            {"mode_diameter_m", geom.mode_diameter},
            {"mirror_transmittivity", geom.mirror_transmittivity},
            {"n_atoms", geom.n_atoms},
            {"anchor", {{"g0", geom.anchor.g0}, {"length_m", geom.anchor.length}, {"diameter_m", geom.anchor.diameter}}}}},
          {"figures",
           {{"g", f.g},
            {"finesse", f.finesse},
            {"fsr_hz", f.fsr},
            {"gamma_hwhm", f.gamma_hwhm},
            {"gamma_hwhm_hz", f.gamma_hwhm_hz},
            {"lifetime_s", f.lifetime},
            {"mode_volume_m3", f.mode_volume}}}};
}

Json gate_json(const protocol::GateReport& r, experiment::UnitReport units) {
  Json inputs = Json::object();
  for (const auto& [key, value] : r.inputs) inputs[key] = complex_pair(value);
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json step = {{"name", s.name},
                 {"target", s.target},
                 {"effective_rate", s.effective_rate},
                 {"pulse_area", s.pulse_area},
                 {"duration", units == experiment::UnitReport::si ? s.duration_seconds : s.duration},
                 {"leakage", s.leakage}};
    if (r.mode == protocol::ProtocolMode::chain) step["light_shift_phase"] = s.light_shift_phase;
    step["state"] = state_json(s.snapshot);
    steps.push_back(std::move(step));
  }
  Json out = {{"protocol", r.protocol},
              {"mode", std::string(protocol::name(r.mode))},
              {"time_unit", units == experiment::UnitReport::si ? "s" : "1/Gamma"},
              {"inputs", inputs},
              {"fidelity_vs_target", r.fidelity_vs_target},
              {"retained_norm", r.retained_norm},
              {"mode_excitation", r.mode_excitation}};
  if (r.entanglement_entropy) out["entanglement_entropy_bits"] = *r.entanglement_entropy;
  out["initial_state"] = state_json(r.initial_state);
  out["final_state"] = state_json(r.final_state);
  out["target_state"] = state_json(r.target_state);
  out["steps"] = std::move(steps);
  return out;
}

}  // namespace lsiib::report
