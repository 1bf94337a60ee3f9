#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lsiib/lsiib.h"

namespace {

struct LadderGuard {
  lsiib_ladder* p = nullptr;
  ~LadderGuard() { lsiib_ladder_destroy(p); }
};

struct TrajGuard {
  lsiib_trajectory* p = nullptr;
  ~TrajGuard() { lsiib_trajectory_destroy(p); }
};

lsiib_cnot_params cnot_params() {
  lsiib_cnot_params p{};
  p.n_atoms = 1225;
  p.delta = 1000;
  p.omega1 = 1e-3;
  p.omega2 = 100;
  p.omega1_prime = p.omega2_prime = 10;
  p.omega_i = p.omega_ii = 10;
  p.g_c = 54.25;
  p.detuning_sign = 1;
  return p;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_GT(std::strlen(lsiib_version()), 0u);
  EXPECT_STREQ(lsiib_status_name(LSIIB_OK), "ok");
  EXPECT_EQ(lsiib_status_exit_code(LSIIB_OK), 0);
  EXPECT_EQ(lsiib_status_exit_code(LSIIB_ERR_CONFIG), 2);
  for (auto s : {LSIIB_ERR_INVALID_PARAMETER, LSIIB_ERR_ZERO_DETUNING, LSIIB_ERR_BASIS_MISMATCH,
                 LSIIB_ERR_PRECONDITION, LSIIB_ERR_PROTOCOL_VIOLATION, LSIIB_ERR_INVALID_GEOMETRY}) {
    EXPECT_EQ(lsiib_status_exit_code(s), 3) << lsiib_status_name(s);
  }
  EXPECT_EQ(lsiib_status_exit_code(LSIIB_ERR_FIT_FAILURE), 4);
  EXPECT_EQ(lsiib_status_exit_code(LSIIB_ERR_NUMERICAL), 4);
}

TEST(CApi, LadderLightShifts) {
  LadderGuard l;
  ASSERT_EQ(lsiib_ladder_create(1225, 1e-3, 100, 1000, NAN, 2, 1, &l.p), LSIIB_OK);
  lsiib_light_shifts s{};
  ASSERT_EQ(lsiib_ladder_light_shifts(l.p, &s), LSIIB_OK);
  EXPECT_NEAR(s.blockade_shift, -1.0 / 80.0, 1e-6);
  EXPECT_NEAR(s.rabi_collective, 1.75e-3, 1e-12);
  double delta = 0;
  ASSERT_EQ(lsiib_ladder_two_photon_detuning(l.p, &delta), LSIIB_OK);
  EXPECT_NEAR(delta, 2.5, 0.025);
  size_t dim = 0;
  ASSERT_EQ(lsiib_ladder_dim(l.p, &dim), LSIIB_OK);
  EXPECT_EQ(dim, 6u);
  std::vector<double> ev(dim);
  ASSERT_EQ(lsiib_ladder_eigenvalues(l.p, ev.data()), LSIIB_OK);
  for (size_t i = 1; i < dim; ++i) EXPECT_LE(ev[i - 1], ev[i]);
}

TEST(CApi, SimulateAndFit) {
  LadderGuard l;
  ASSERT_EQ(lsiib_ladder_create(1225, 1e-3, 100, 1000, NAN, 2, 1, &l.p), LSIIB_OK);
  TrajGuard t;
  ASSERT_EQ(lsiib_simulate_blockade(l.p, 2500, 1, &t.p), LSIIB_OK);
  EXPECT_EQ(lsiib_trajectory_samples(t.p), 2501u);
  EXPECT_EQ(lsiib_trajectory_labels(t.p), 6u);
  EXPECT_STREQ(lsiib_trajectory_label(t.p, 0), "A");
  EXPECT_EQ(lsiib_trajectory_label(t.p, 6), nullptr);
  double p0 = 0;
  ASSERT_EQ(lsiib_trajectory_population(t.p, "A", 0, &p0), LSIIB_OK);
  EXPECT_DOUBLE_EQ(p0, 1.0);
  lsiib_rabi_fit fit{};
  ASSERT_EQ(lsiib_trajectory_fit_rabi(t.p, "C1", &fit), LSIIB_OK);
  EXPECT_NEAR(fit.first_pi_time / 1795.0, 1.0, 0.05);
  double max_c2 = 1;
  ASSERT_EQ(lsiib_trajectory_max_population(t.p, "C2", &max_c2), LSIIB_OK);
  EXPECT_LT(max_c2, 0.05);
  EXPECT_EQ(lsiib_trajectory_population(t.p, "Z9", 0, &p0), LSIIB_ERR_BASIS_MISMATCH);
  EXPECT_EQ(lsiib_trajectory_population(t.p, "A", 999999, &p0), LSIIB_ERR_OUT_OF_RANGE);
}

TEST(CApi, ErrorsCarryMessages) {
  lsiib_ladder* l = nullptr;
  EXPECT_EQ(lsiib_ladder_create(0, 1e-3, 100, 1000, NAN, 2, 1, &l), LSIIB_ERR_INVALID_PARAMETER);
  EXPECT_EQ(l, nullptr);
  EXPECT_GT(std::strlen(lsiib_last_error()), 0u);
  EXPECT_EQ(lsiib_ladder_create(10, 1e-3, 100, 0, NAN, 2, 1, &l), LSIIB_ERR_ZERO_DETUNING);
  EXPECT_EQ(lsiib_ladder_create(10, 1e-3, 100, 1000, NAN, 2, 1, nullptr), LSIIB_ERR_NULL_ARGUMENT);
  EXPECT_EQ(lsiib_ladder_light_shifts(nullptr, nullptr), LSIIB_ERR_NULL_ARGUMENT);
  lsiib_ladder_destroy(nullptr);
  lsiib_trajectory_destroy(nullptr);
}

TEST(CApi, CnotBellCase) {
  const auto p = cnot_params();
  const double r = 1.0 / std::sqrt(2.0);
  lsiib_gate_result g{};
  ASSERT_EQ(lsiib_run_cnot(&p, {r, 0}, {r, 0}, {1, 0}, {0, 0}, LSIIB_MODE_IDEAL, &g), LSIIB_OK);
  EXPECT_GE(g.fidelity, 1.0 - 1e-12);
  EXPECT_NEAR(g.p_coincidence, 0.5, 1e-12);
  EXPECT_TRUE(std::isnan(g.entanglement_entropy));
  EXPECT_EQ(lsiib_run_cnot(&p, {1, 0}, {1, 0}, {1, 0}, {0, 0}, LSIIB_MODE_IDEAL, &g), LSIIB_ERR_INVALID_PARAMETER);
}

TEST(CApi, InterlinkEntropy) {
  lsiib_interlink_params p{1225, 1000, 10, 10, 54.25, 0, 1};
  const double r = 1.0 / std::sqrt(2.0);
  lsiib_gate_result g{};
  ASSERT_EQ(lsiib_run_interlink(&p, {r, 0}, {0, r}, 1, LSIIB_MODE_STRICT, &g), LSIIB_OK);
  EXPECT_GE(g.fidelity, 1.0 - 1e-12);
  EXPECT_NEAR(g.entanglement_entropy, 1.0, 1e-9);
}

TEST(CApi, Cavity) {
  lsiib_cavity_geometry geom{40e-6, 5e-6, 1.2e-6, 1, 0, 0, 0};
  lsiib_cavity_figures f{};
  ASSERT_EQ(lsiib_cavity_figures_compute(&geom, &f), LSIIB_OK);
  EXPECT_NEAR(f.fsr / 3.747e12, 1.0, 1e-3);
  geom.mirror_transmittivity = 2.0;
  EXPECT_EQ(lsiib_cavity_figures_compute(&geom, &f), LSIIB_ERR_INVALID_GEOMETRY);
  double g = 0;
  EXPECT_EQ(lsiib_first_principles_g(2.4e15, 1e-15, 3e-29, &g), LSIIB_OK);
  EXPECT_GT(g, 0.0);
}

TEST(CApi, ConfigIssuesAreListed) {
  lsiib_config* c = nullptr;
  EXPECT_EQ(lsiib_config_parse("[experiment]\ntype = cavity\n[cavity]\nlength = -1\n", &c), LSIIB_ERR_CONFIG);
  EXPECT_EQ(c, nullptr);
  ASSERT_GE(lsiib_config_issue_count(), 2u);
  bool saw_length = false;
  for (size_t i = 0; i < lsiib_config_issue_count(); ++i) {
    saw_length |= std::string(lsiib_config_issue(i)).find("cavity.length") != std::string::npos;
  }
  EXPECT_TRUE(saw_length);
  EXPECT_EQ(lsiib_config_issue(999), nullptr);
}

TEST(CApi, RunExperimentFromConfig) {
  lsiib_config* c = nullptr;
  ASSERT_EQ(lsiib_config_parse("[experiment]\ntype = cavity\n[cavity]\nlength = 40e-6\nmode_diameter = 5e-6\n"
                               "mirror_transmittivity = 1.2e-6\nn_atoms = 1\n",
                               &c),
            LSIIB_OK);
  const auto dir = std::filesystem::temp_directory_path() / "lsiib_capi_run";
  lsiib_run* run = nullptr;
  ASSERT_EQ(lsiib_run_experiment(c, dir.c_str(), &run), LSIIB_OK);
  EXPECT_NE(std::string(lsiib_run_summary(run)).find("finesse"), std::string::npos);
  ASSERT_EQ(lsiib_run_artifact_count(run), 1u);
  EXPECT_TRUE(std::filesystem::exists(lsiib_run_artifact(run, 0)));
  lsiib_run_destroy(run);
  lsiib_config_destroy(c);
  std::filesystem::remove_all(dir);
}
