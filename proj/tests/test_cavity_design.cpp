#include <cmath>

#include <gtest/gtest.h>

#include "lsiib/cavity_design.hpp"
#include "lsiib/errors.hpp"
#include "lsiib/units.hpp"

using namespace lsiib;
using namespace lsiib::cavity;

namespace {

CavityGeometry anchor_geometry() { return {40e-6, 5e-6, 1.2e-6, 1, {}}; }
CavityGeometry long_geometry() { return {0.05, 5e-6, 1.2e-6, 3000, {}}; }

collective::LadderParams blockade_drive() {
  return collective::LadderParams::from_common(1225, 1e-3, 100.0, 1000.0, 0.0, 2, true);
}

}  // namespace

TEST(Cavity, AnchorFigures) {
  const auto f = cavity_figures(anchor_geometry());
  EXPECT_DOUBLE_EQ(f.g, 54.25);
  EXPECT_NEAR(f.finesse / 2.618e6, 1.0, 1e-3);
  EXPECT_NEAR(f.fsr / 3.747e12, 1.0, 1e-3);
  EXPECT_NEAR(f.gamma_hwhm / 0.1193, 1.0, 1e-3);
  EXPECT_NEAR(f.lifetime / 222e-9, 1.0, 0.01);
  EXPECT_NEAR(f.mode_volume, std::acos(-1.0) / 4.0 * 25e-12 * 40e-6, 1e-27);
}

TEST(Cavity, LongCavityFigures) {
  const auto f = cavity_figures(long_geometry());
  EXPECT_NEAR(f.g / 84.04, 1.0, 1e-3);
  EXPECT_NEAR(f.fsr / 2.998e9, 1.0, 1e-3);
  EXPECT_NEAR(f.gamma_hwhm / 9.55e-5, 1.0, 0.01);
  EXPECT_NEAR(f.lifetime / 0.278e-3, 1.0, 0.01);
}

TEST(Cavity, LifetimeTimesLinewidthIsOne) {
  for (const auto& g : {anchor_geometry(), long_geometry()}) {
    const auto f = cavity_figures(g);
    EXPECT_NEAR(f.lifetime * f.gamma_hwhm * units::kGammaSI, 1.0, 1e-12);
    EXPECT_NEAR(f.finesse * 2.0 * f.gamma_hwhm_hz / f.fsr, 1.0, 1e-12);
  }
}

TEST(Cavity, ScalingLaws) {
  auto g = anchor_geometry();
  const auto base = cavity_figures(g);
  g.length *= 4.0;
  const auto longer = cavity_figures(g);
  EXPECT_NEAR(longer.g, base.g / 2.0, 1e-12);
  EXPECT_NEAR(longer.lifetime / base.lifetime, 4.0, 1e-12);
  g = anchor_geometry();
  g.n_atoms = 4;
  EXPECT_DOUBLE_EQ(cavity_figures(g).g, 2.0 * base.g);
}

TEST(Cavity, InvalidGeometry) {
  for (auto mutate : {+[](CavityGeometry& g) { g.mirror_transmittivity = 1.0; },
                      +[](CavityGeometry& g) { g.mirror_transmittivity = 0.0; },
                      +[](CavityGeometry& g) { g.length = 0.0; },
                      +[](CavityGeometry& g) { g.mode_diameter = -1.0; },
                      +[](CavityGeometry& g) { g.n_atoms = 0; }}) {
    auto g = anchor_geometry();
    mutate(g);
    try {
      cavity_figures(g);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_geometry);
    }
  }
}

TEST(FirstPrinciples, CloseToAnchor) {
  const auto f = cavity_figures(anchor_geometry());
  const double omega = 2.0 * units::kPi * units::kSpeedOfLight / kRbD2Wavelength;
  const double g = first_principles_g(omega, f.mode_volume, kRbCyclingDipole);
  EXPECT_NEAR(g / 54.25, 1.0, 0.15);
}

TEST(FirstPrinciples, Scaling) {
  const double g = first_principles_g(2.4e15, 1e-15, 3e-29);
  EXPECT_NEAR(first_principles_g(2.4e15, 4e-15, 3e-29), g / 2.0, 1e-12 * g);
  EXPECT_NEAR(first_principles_g(9.6e15, 1e-15, 3e-29), g * 2.0, 1e-12 * g);
  EXPECT_THROW(first_principles_g(0.0, 1e-15, 3e-29), Error);
}

TEST(Feasibility, LongCavityOutlivesPiPulse) {
  const auto f = gate_feasibility(long_geometry(), blockade_drive());
  EXPECT_NEAR(f.pi_time_s / 47.6e-6, 1.0, 0.01);
  EXPECT_NEAR(f.lifetime_s / 2.78e-4, 1.0, 0.01);
  EXPECT_TRUE(f.feasible);
}

TEST(Feasibility, ShortLifetimeIsInfeasible) {
  const auto f = gate_feasibility(1e-6, blockade_drive());
  EXPECT_FALSE(f.feasible);
}

TEST(Feasibility, DoublingRabiHalvesPiTime) {
  auto p = blockade_drive();
  const auto base = gate_feasibility(1.0, p);
  p.omega1 *= 2.0;
  EXPECT_NEAR(gate_feasibility(1.0, p).pi_time_s, base.pi_time_s / 2.0, 1e-18);
}
