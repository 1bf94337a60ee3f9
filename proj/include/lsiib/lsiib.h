#ifndef LSIIB_H
#define LSIIB_H

#include <stddef.h>

#if defined(LSIIB_BUILDING_LIBRARY)
#define LSIIB_API __attribute__((visibility("default")))
#else
#define LSIIB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning lsiib_status leaves a message for
 * lsiib_last_error() on failure (per thread). */
typedef enum lsiib_status {
  LSIIB_OK = 0,
  LSIIB_ERR_CONFIG = 1,
  LSIIB_ERR_INVALID_PARAMETER = 2,
  LSIIB_ERR_ZERO_DETUNING = 3,
  LSIIB_ERR_BASIS_MISMATCH = 4,
  LSIIB_ERR_PRECONDITION = 5,
  LSIIB_ERR_PROTOCOL_VIOLATION = 6,
  LSIIB_ERR_INVALID_GEOMETRY = 7,
  LSIIB_ERR_FIT_FAILURE = 8,
  LSIIB_ERR_NUMERICAL = 9,
  LSIIB_ERR_NULL_ARGUMENT = 10,
  LSIIB_ERR_OUT_OF_RANGE = 11,
  LSIIB_ERR_INTERNAL = 12
} lsiib_status;

typedef enum lsiib_mode { LSIIB_MODE_IDEAL = 0, LSIIB_MODE_CHAIN = 1, LSIIB_MODE_STRICT = 2 } lsiib_mode;

LSIIB_API const char* lsiib_version(void);
LSIIB_API const char* lsiib_status_name(lsiib_status status);
/* Process exit code for a status: 0 ok, 2 config, 3 physics precondition,
 * 4 numerical or internal. */
LSIIB_API int lsiib_status_exit_code(lsiib_status status);
/* Message of the last failure on this thread ("" if none). */
LSIIB_API const char* lsiib_last_error(void);

typedef struct lsiib_complex {
  double re;
  double im;
} lsiib_complex;

/* ---- collective ladder ---- */

typedef struct lsiib_ladder lsiib_ladder;

/* Energies in Gamma. two_photon_detuning may be NaN for the resonant value. */
LSIIB_API lsiib_status lsiib_ladder_create(int n_atoms, double omega1, double omega2, double delta,
                                           double two_photon_detuning, int truncation, int trailing_g,
                                           lsiib_ladder** out);
LSIIB_API void lsiib_ladder_destroy(lsiib_ladder* ladder);

typedef struct lsiib_light_shifts {
  double eps_a;
  double eps_c1;
  double eps_c2;
  double blockade_shift;
  double rabi_collective;
} lsiib_light_shifts;

LSIIB_API lsiib_status lsiib_ladder_light_shifts(const lsiib_ladder* ladder, lsiib_light_shifts* out);
LSIIB_API lsiib_status lsiib_ladder_blockade_shift_numeric(const lsiib_ladder* ladder, double* out);
LSIIB_API lsiib_status lsiib_ladder_two_photon_detuning(const lsiib_ladder* ladder, double* out);
LSIIB_API lsiib_status lsiib_ladder_dim(const lsiib_ladder* ladder, size_t* out);
/* Ascending eigenvalues of the full ladder; `values` holds lsiib_ladder_dim entries. */
LSIIB_API lsiib_status lsiib_ladder_eigenvalues(const lsiib_ladder* ladder, double* values);

/* ---- trajectories ---- */

typedef struct lsiib_trajectory lsiib_trajectory;

LSIIB_API lsiib_status lsiib_simulate_blockade(const lsiib_ladder* ladder, double duration, double sample_step,
                                               lsiib_trajectory** out);
LSIIB_API void lsiib_trajectory_destroy(lsiib_trajectory* traj);
LSIIB_API size_t lsiib_trajectory_samples(const lsiib_trajectory* traj);
LSIIB_API size_t lsiib_trajectory_labels(const lsiib_trajectory* traj);
/* NULL when out of range. The pointer lives as long as the trajectory. */
LSIIB_API const char* lsiib_trajectory_label(const lsiib_trajectory* traj, size_t index);
LSIIB_API lsiib_status lsiib_trajectory_time(const lsiib_trajectory* traj, size_t sample, double* out);
LSIIB_API lsiib_status lsiib_trajectory_population(const lsiib_trajectory* traj, const char* label, size_t sample,
                                                   double* out);
LSIIB_API lsiib_status lsiib_trajectory_max_population(const lsiib_trajectory* traj, const char* label,
                                                       double* out);

typedef struct lsiib_rabi_fit {
  double frequency;
  double contrast;
  double first_pi_time;
} lsiib_rabi_fit;

LSIIB_API lsiib_status lsiib_trajectory_fit_rabi(const lsiib_trajectory* traj, const char* label,
                                                 lsiib_rabi_fit* out);

/* ---- gate protocols ---- */

typedef struct lsiib_cnot_params {
  int n_atoms;
  double delta;
  double omega1, omega2;
  double omega1_prime, omega2_prime;
  double omega_i, omega_ii;
  double g_c;
  int detuning_sign;
} lsiib_cnot_params;

typedef struct lsiib_gate_result {
  double fidelity;
  double retained_norm;
  double mode_excitation;
  double total_duration; /* 1/Gamma */
  double max_step_leakage;
  double p_photon1; /* coincidence observables, NaN when the cavity is not empty */
  double p_photon2;
  double p_coincidence;
  double entanglement_entropy; /* bits; NaN unless an ancilla was used */
} lsiib_gate_result;

LSIIB_API lsiib_status lsiib_run_cnot(const lsiib_cnot_params* params, lsiib_complex alpha, lsiib_complex beta,
                                      lsiib_complex xi, lsiib_complex eta, lsiib_mode mode, lsiib_gate_result* out);

typedef struct lsiib_interlink_params {
  int n_atoms;
  double delta;
  double omega_read;
  double omega_write;
  double g_f;
  double transit_time;
  int detuning_sign;
} lsiib_interlink_params;

LSIIB_API lsiib_status lsiib_run_interlink(const lsiib_interlink_params* params, lsiib_complex alpha,
                                           lsiib_complex beta, int with_ancilla, lsiib_mode mode,
                                           lsiib_gate_result* out);

/* ---- cavity ---- */

typedef struct lsiib_cavity_geometry {
  double length;
  double mode_diameter;
  double mirror_transmittivity;
  int n_atoms;
  double anchor_g0; /* 0 selects the default anchor for all three fields */
  double anchor_length;
  double anchor_diameter;
} lsiib_cavity_geometry;

typedef struct lsiib_cavity_figures {
  double g;
  double finesse;
  double fsr;
  double gamma_hwhm;
  double gamma_hwhm_hz;
  double lifetime;
  double mode_volume;
} lsiib_cavity_figures;

LSIIB_API lsiib_status lsiib_cavity_figures_compute(const lsiib_cavity_geometry* geom, lsiib_cavity_figures* out);
LSIIB_API lsiib_status lsiib_first_principles_g(double omega, double mode_volume, double dipole_moment, double* out);

/* ---- experiments ---- */

typedef struct lsiib_config lsiib_config;
typedef struct lsiib_run lsiib_run;

LSIIB_API lsiib_status lsiib_config_parse(const char* text, lsiib_config** out);
LSIIB_API lsiib_status lsiib_config_load(const char* path, lsiib_config** out);
LSIIB_API void lsiib_config_destroy(lsiib_config* config);
/* Issues of the last failed parse on this thread, one per problem. */
LSIIB_API size_t lsiib_config_issue_count(void);
LSIIB_API const char* lsiib_config_issue(size_t index);

LSIIB_API lsiib_status lsiib_run_experiment(const lsiib_config* config, const char* output_dir, lsiib_run** out);
LSIIB_API void lsiib_run_destroy(lsiib_run* run);
LSIIB_API const char* lsiib_run_summary(const lsiib_run* run);
LSIIB_API size_t lsiib_run_artifact_count(const lsiib_run* run);
LSIIB_API const char* lsiib_run_artifact(const lsiib_run* run, size_t index);

#ifdef __cplusplus
}
#endif

#endif
