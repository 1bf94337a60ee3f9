#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsiib/cavity_design.hpp"
#include "lsiib/collective_model.hpp"
#include "lsiib/gate_protocol.hpp"

// Experiment descriptions (INI documents of flat sections) and their
// execution into trajectory.csv / report.json / sweep.csv.
namespace lsiib::experiment {

enum class ExperimentType { blockade, ladder_spectrum, cnot, interlink, cavity, sweep };
enum class UnitReport { gamma_units, si };

std::string_view name(ExperimentType type);
std::string_view name(UnitReport units);

// [ladder]. two_photon_detuning is absent for the resonant value.
struct LadderBlock {
  int n_atoms = 0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double delta = 0.0;
  std::optional<double> two_photon_detuning;
  int truncation = 2;
  bool trailing_g = true;
  collective::BlockadeTerm blockade = collective::BlockadeTerm::keep;

  // Resolved params (resonant Delta filled in when not given).
  collective::LadderParams params() const;
};

struct CnotBlock {
  protocol::CnotParameters params;
  protocol::CnotInputs inputs;
};

struct InterlinkBlock {
  protocol::InterlinkParameters params;
  lsiib::Complex alpha{1.0, 0.0};
  lsiib::Complex beta{0.0, 0.0};
  bool with_ancilla = false;
};

struct CavityBlock {
  cavity::CavityGeometry geometry;
  double dipole_moment = cavity::kRbCyclingDipole;  // C m
  double wavelength = cavity::kRbD2Wavelength;      // m
};

enum class SweepScale { linear, log };

// [sweep]: one ladder.* or cavity.* key varied over `points` values.
struct SweepBlock {
  ExperimentType base = ExperimentType::blockade;  // blockade or cavity
  std::string parameter;                           // e.g. "ladder.omega1"
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  SweepScale scale = SweepScale::linear;
  unsigned threads = 0;  // 0: hardware concurrency

  std::vector<double> values() const;
};

struct OutputNames {
  std::string trajectory = "trajectory.csv";
  std::string report = "report.json";
  std::string sweep = "sweep.csv";
};

struct ExperimentConfig {
  ExperimentType type = ExperimentType::blockade;
  protocol::ProtocolMode mode = protocol::ProtocolMode::ideal;
  UnitReport unit_report = UnitReport::gamma_units;
  double duration = 0.0;     // 1/Gamma (blockade, sweep over blockade)
  double sample_step = 0.0;  // 1/Gamma
  std::optional<LadderBlock> ladder;
  std::optional<CnotBlock> cnot;
  std::optional<InterlinkBlock> interlink;
  std::optional<CavityBlock> cavity;
  std::optional<SweepBlock> sweep;
  OutputNames output;
};

// Parses an INI document. Collects every problem (missing section or key,
// unknown key, malformed or out-of-range value) and throws ConfigError with
// one "section.key: message" issue per problem.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunResult {
  std::string summary;  // one line
  std::vector<std::filesystem::path> artifacts;
};

// Runs the experiment and writes its artifacts into output_dir (created if
// missing). Outputs are byte-identical for identical configs.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& output_dir);

}  // namespace lsiib::experiment
