#include "lsiib/lsiib.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "lsiib/cavity_design.hpp"
#include "lsiib/collective_model.hpp"
#include "lsiib/dynamics.hpp"
#include "lsiib/errors.hpp"
#include "lsiib/experiment.hpp"
#include "lsiib/gate_protocol.hpp"

struct lsiib_ladder {
  lsiib::collective::LadderParams params;
};

struct lsiib_trajectory {
  lsiib::dynamics::TrajectoryRecord record;
};

struct lsiib_config {
  lsiib::experiment::ExperimentConfig config;
};

struct lsiib_run {
  std::string summary;
  std::vector<std::string> artifacts;
};

namespace {

thread_local std::string last_error;
thread_local std::vector<std::string> config_issues;

lsiib_status status_of(lsiib::ErrorKind kind) {
  using K = lsiib::ErrorKind;
  switch (kind) {
    case K::config: return LSIIB_ERR_CONFIG;
    case K::invalid_parameter: return LSIIB_ERR_INVALID_PARAMETER;
    case K::zero_detuning: return LSIIB_ERR_ZERO_DETUNING;
    case K::basis_mismatch: return LSIIB_ERR_BASIS_MISMATCH;
    case K::precondition: return LSIIB_ERR_PRECONDITION;
    case K::protocol_violation: return LSIIB_ERR_PROTOCOL_VIOLATION;
    case K::invalid_geometry: return LSIIB_ERR_INVALID_GEOMETRY;
    case K::fit_failure: return LSIIB_ERR_FIT_FAILURE;
    case K::numerical: return LSIIB_ERR_NUMERICAL;
  }
  return LSIIB_ERR_INTERNAL;
}

lsiib_status fail(lsiib_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
lsiib_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return LSIIB_OK;
  } catch (const lsiib::ConfigError& e) {
    config_issues = e.issues();
    return fail(LSIIB_ERR_CONFIG, e.what());
  } catch (const lsiib::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LSIIB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LSIIB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LSIIB_ERR_INTERNAL, "unknown exception");
  }
}

#define LSIIB_REQUIRE(ptr)                                                   \
  do {                                                                       \
    if (!(ptr)) return fail(LSIIB_ERR_NULL_ARGUMENT, #ptr " must not be NULL"); \
  } while (0)

lsiib::Complex to_cpp(lsiib_complex z) { return {z.re, z.im}; }

lsiib::protocol::ProtocolMode to_cpp(lsiib_mode m) {
  switch (m) {
    case LSIIB_MODE_CHAIN: return lsiib::protocol::ProtocolMode::chain;
    case LSIIB_MODE_STRICT: return lsiib::protocol::ProtocolMode::strict;
    default: return lsiib::protocol::ProtocolMode::ideal;
  }
}

void fill_result(const lsiib::protocol::GateReport& r, lsiib_gate_result* out) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  *out = lsiib_gate_result{r.fidelity_vs_target, r.retained_norm, r.mode_excitation, 0.0, 0.0, nan, nan, nan, nan};
  for (const auto& s : r.steps) {
    out->total_duration += s.duration;
    out->max_step_leakage = std::max(out->max_step_leakage, s.leakage);
  }
  if (r.entanglement_entropy) out->entanglement_entropy = *r.entanglement_entropy;
}

bool valid_mode(lsiib_mode m) { return m == LSIIB_MODE_IDEAL || m == LSIIB_MODE_CHAIN || m == LSIIB_MODE_STRICT; }

}  // namespace

extern "C" {

const char* lsiib_version(void) { return "0.1.0"; }

const char* lsiib_status_name(lsiib_status status) {
  switch (status) {
    case LSIIB_OK: return "ok";
    case LSIIB_ERR_CONFIG: return "config";
    case LSIIB_ERR_INVALID_PARAMETER: return "invalid-parameter";
    case LSIIB_ERR_ZERO_DETUNING: return "zero-detuning";
    case LSIIB_ERR_BASIS_MISMATCH: return "basis-mismatch";
    case LSIIB_ERR_PRECONDITION: return "precondition";
    case LSIIB_ERR_PROTOCOL_VIOLATION: return "protocol-violation";
    case LSIIB_ERR_INVALID_GEOMETRY: return "invalid-geometry";
    case LSIIB_ERR_FIT_FAILURE: return "fit-failure";
    case LSIIB_ERR_NUMERICAL: return "numerical";
    case LSIIB_ERR_NULL_ARGUMENT: return "null-argument";
    case LSIIB_ERR_OUT_OF_RANGE: return "out-of-range";
    case LSIIB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int lsiib_status_exit_code(lsiib_status status) {
  switch (status) {
    case LSIIB_OK: return 0;
    case LSIIB_ERR_CONFIG: return 2;
    case LSIIB_ERR_INVALID_PARAMETER:
    case LSIIB_ERR_ZERO_DETUNING:
    case LSIIB_ERR_BASIS_MISMATCH:
    case LSIIB_ERR_PRECONDITION:
    case LSIIB_ERR_PROTOCOL_VIOLATION:
    case LSIIB_ERR_INVALID_GEOMETRY: return 3;
    default: return 4;
  }
}

const char* lsiib_last_error(void) { return last_error.c_str(); }

lsiib_status lsiib_ladder_create(int n_atoms, double omega1, double omega2, double delta, double two_photon_detuning,
                                 int truncation, int trailing_g, lsiib_ladder** out) {
  LSIIB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const double detuning = std::isnan(two_photon_detuning)
                                ? lsiib::collective::resonant_two_photon_detuning(n_atoms, omega1, omega2, delta)
                                : two_photon_detuning;
    auto params = lsiib::collective::LadderParams::from_common(n_atoms, omega1, omega2, delta, detuning, truncation,
                                                               trailing_g != 0);
    params.validate();
    *out = new lsiib_ladder{params};
  });
}

void lsiib_ladder_destroy(lsiib_ladder* ladder) { delete ladder; }

lsiib_status lsiib_ladder_light_shifts(const lsiib_ladder* ladder, lsiib_light_shifts* out) {
  LSIIB_REQUIRE(ladder);
  LSIIB_REQUIRE(out);
  return guarded([&] {
    const auto s = lsiib::collective::light_shifts(ladder->params);
    *out = lsiib_light_shifts{s.eps_a, s.eps_c1, s.eps_c2, s.blockade_shift, s.rabi_collective};
  });
}

lsiib_status lsiib_ladder_blockade_shift_numeric(const lsiib_ladder* ladder, double* out) {
  LSIIB_REQUIRE(ladder);
  LSIIB_REQUIRE(out);
  return guarded([&] { *out = lsiib::collective::blockade_shift_numeric(ladder->params); });
}

lsiib_status lsiib_ladder_two_photon_detuning(const lsiib_ladder* ladder, double* out) {
  LSIIB_REQUIRE(ladder);
  LSIIB_REQUIRE(out);
  *out = ladder->params.two_photon_detuning();
  return LSIIB_OK;
}

lsiib_status lsiib_ladder_dim(const lsiib_ladder* ladder, size_t* out) {
  LSIIB_REQUIRE(ladder);
  LSIIB_REQUIRE(out);
  return guarded([&] { *out = lsiib::collective::ladder_rungs(ladder->params).size(); });
}

lsiib_status lsiib_ladder_eigenvalues(const lsiib_ladder* ladder, double* values) {
  LSIIB_REQUIRE(ladder);
  LSIIB_REQUIRE(values);
  return guarded([&] {
    const auto vals = lsiib::collective::build_full_ladder(ladder->params).eigenvalues();
    for (Eigen::Index i = 0; i < vals.size(); ++i) values[i] = vals(i);
  });
}

lsiib_status lsiib_simulate_blockade(const lsiib_ladder* ladder, double duration, double sample_step,
                                     lsiib_trajectory** out) {
  LSIIB_REQUIRE(ladder);
  LSIIB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto record = lsiib::dynamics::simulate_blockade(ladder->params, duration, sample_step,
                                                     lsiib::dynamics::DetuningPolicy::as_given);
    *out = new lsiib_trajectory{std::move(record)};
  });
}

void lsiib_trajectory_destroy(lsiib_trajectory* traj) { delete traj; }

size_t lsiib_trajectory_samples(const lsiib_trajectory* traj) { return traj ? traj->record.times.size() : 0; }

size_t lsiib_trajectory_labels(const lsiib_trajectory* traj) { return traj ? traj->record.labels.size() : 0; }

const char* lsiib_trajectory_label(const lsiib_trajectory* traj, size_t index) {
  if (!traj || index >= traj->record.labels.size()) return nullptr;
  return traj->record.labels[index].c_str();
}

lsiib_status lsiib_trajectory_time(const lsiib_trajectory* traj, size_t sample, double* out) {
  LSIIB_REQUIRE(traj);
  LSIIB_REQUIRE(out);
  if (sample >= traj->record.times.size()) return fail(LSIIB_ERR_OUT_OF_RANGE, "sample index out of range");
  *out = traj->record.times[sample];
  return LSIIB_OK;
}

lsiib_status lsiib_trajectory_population(const lsiib_trajectory* traj, const char* label, size_t sample,
                                         double* out) {
  LSIIB_REQUIRE(traj);
  LSIIB_REQUIRE(label);
  LSIIB_REQUIRE(out);
  if (sample >= traj->record.times.size()) return fail(LSIIB_ERR_OUT_OF_RANGE, "sample index out of range");
  return guarded([&] { *out = traj->record.series(label)[sample]; });
}

lsiib_status lsiib_trajectory_max_population(const lsiib_trajectory* traj, const char* label, double* out) {
  LSIIB_REQUIRE(traj);
  LSIIB_REQUIRE(label);
  LSIIB_REQUIRE(out);
  return guarded([&] { *out = traj->record.max_population(label); });
}

lsiib_status lsiib_trajectory_fit_rabi(const lsiib_trajectory* traj, const char* label, lsiib_rabi_fit* out) {
  LSIIB_REQUIRE(traj);
  LSIIB_REQUIRE(label);
  LSIIB_REQUIRE(out);
  return guarded([&] {
    const auto fit = lsiib::dynamics::fit_rabi(traj->record, label);
    *out = lsiib_rabi_fit{fit.frequency, fit.contrast, fit.first_pi_time};
  });
}

lsiib_status lsiib_run_cnot(const lsiib_cnot_params* params, lsiib_complex alpha, lsiib_complex beta,
                            lsiib_complex xi, lsiib_complex eta, lsiib_mode mode, lsiib_gate_result* out) {
  LSIIB_REQUIRE(params);
  LSIIB_REQUIRE(out);
  if (!valid_mode(mode)) return fail(LSIIB_ERR_INVALID_PARAMETER, "unknown protocol mode");
  return guarded([&] {
    lsiib::protocol::CnotParameters p;
    p.n_atoms = params->n_atoms;
    p.delta = params->delta;
    p.omega1 = params->omega1;
    p.omega2 = params->omega2;
    p.omega1_prime = params->omega1_prime;
    p.omega2_prime = params->omega2_prime;
    p.omega_i = params->omega_i;
    p.omega_ii = params->omega_ii;
    p.g_c = params->g_c;
    p.detuning_sign = params->detuning_sign;
    const lsiib::protocol::CnotInputs in{to_cpp(alpha), to_cpp(beta), to_cpp(xi), to_cpp(eta)};
    const auto report = lsiib::protocol::run_cnot(in, p, to_cpp(mode));
    fill_result(report, out);
    if (report.final_state.probability("cavity", "1") <= 1e-9) {
      const auto c = lsiib::protocol::coincidence_probabilities(report.final_state);
      out->p_photon1 = c.p_photon1;
      out->p_photon2 = c.p_photon2;
      out->p_coincidence = c.p_coincidence;
    }
  });
}

lsiib_status lsiib_run_interlink(const lsiib_interlink_params* params, lsiib_complex alpha, lsiib_complex beta,
                                 int with_ancilla, lsiib_mode mode, lsiib_gate_result* out) {
  LSIIB_REQUIRE(params);
  LSIIB_REQUIRE(out);
  if (!valid_mode(mode)) return fail(LSIIB_ERR_INVALID_PARAMETER, "unknown protocol mode");
  return guarded([&] {
    lsiib::protocol::InterlinkParameters p;
    p.n_atoms = params->n_atoms;
    p.delta = params->delta;
    p.omega_read = params->omega_read;
    p.omega_write = params->omega_write;
    p.g_f = params->g_f;
    p.transit_time = params->transit_time;
    p.detuning_sign = params->detuning_sign;
    const auto report = lsiib::protocol::run_interlink(to_cpp(alpha), to_cpp(beta), with_ancilla != 0, p, to_cpp(mode));
    fill_result(report, out);
  });
}

lsiib_status lsiib_cavity_figures_compute(const lsiib_cavity_geometry* geom, lsiib_cavity_figures* out) {
  LSIIB_REQUIRE(geom);
  LSIIB_REQUIRE(out);
  return guarded([&] {
    lsiib::cavity::CavityGeometry g;
    g.length = geom->length;
    g.mode_diameter = geom->mode_diameter;
    g.mirror_transmittivity = geom->mirror_transmittivity;
    g.n_atoms = geom->n_atoms;
    if (geom->anchor_g0 != 0.0) g.anchor = {geom->anchor_g0, geom->anchor_length, geom->anchor_diameter};
    const auto f = lsiib::cavity::cavity_figures(g);
    *out = lsiib_cavity_figures{f.g, f.finesse, f.fsr, f.gamma_hwhm, f.gamma_hwhm_hz, f.lifetime, f.mode_volume};
  });
}

lsiib_status lsiib_first_principles_g(double omega, double mode_volume, double dipole_moment, double* out) {
  LSIIB_REQUIRE(out);
  return guarded([&] { *out = lsiib::cavity::first_principles_g(omega, mode_volume, dipole_moment); });
}

lsiib_status lsiib_config_parse(const char* text, lsiib_config** out) {
  LSIIB_REQUIRE(text);
  LSIIB_REQUIRE(out);
  *out = nullptr;
  config_issues.clear();
  return guarded([&] { *out = new lsiib_config{lsiib::experiment::parse_config(text)}; });
}

lsiib_status lsiib_config_load(const char* path, lsiib_config** out) {
  LSIIB_REQUIRE(path);
  LSIIB_REQUIRE(out);
  *out = nullptr;
  config_issues.clear();
  return guarded([&] { *out = new lsiib_config{lsiib::experiment::load_config(path)}; });
}

void lsiib_config_destroy(lsiib_config* config) { delete config; }

size_t lsiib_config_issue_count(void) { return config_issues.size(); }

const char* lsiib_config_issue(size_t index) {
  return index < config_issues.size() ? config_issues[index].c_str() : nullptr;
}

lsiib_status lsiib_run_experiment(const lsiib_config* config, const char* output_dir, lsiib_run** out) {
  LSIIB_REQUIRE(config);
  LSIIB_REQUIRE(output_dir);
  LSIIB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto result = lsiib::experiment::run_experiment(config->config, output_dir);
    auto* run = new lsiib_run{result.summary, {}};
    for (const auto& a : result.artifacts) run->artifacts.push_back(a.string());
    *out = run;
  });
}

void lsiib_run_destroy(lsiib_run* run) { delete run; }

const char* lsiib_run_summary(const lsiib_run* run) { return run ? run->summary.c_str() : ""; }

size_t lsiib_run_artifact_count(const lsiib_run* run) { return run ? run->artifacts.size() : 0; }

const char* lsiib_run_artifact(const lsiib_run* run, size_t index) {
  if (!run || index >= run->artifacts.size()) return nullptr;
  return run->artifacts[index].c_str();
}

}  // extern "C"
