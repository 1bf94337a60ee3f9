#include "lsiib/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "lsiib/dynamics.hpp"
#include "lsiib/errors.hpp"
#include "lsiib/units.hpp"
#include "report_json.hpp"

namespace lsiib::experiment {

namespace {

using report::Json;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::numerical, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorKind::numerical, "write failed for " + path.string());
}

std::filesystem::path write_json(const std::filesystem::path& dir, const std::string& file, const Json& j) {
  const auto path = dir / file;
  write_file(path, j.dump(2) + "\n");
  return path;
}

double time_scale(UnitReport u) { return u == UnitReport::si ? 1.0 / units::kGammaSI : 1.0; }
const char* time_unit(UnitReport u) { return u == UnitReport::si ? "s" : "1/Gamma"; }

Json header(const ExperimentConfig& cfg) {
  return {{"experiment", std::string(name(cfg.type))},
          {"unit_report", std::string(name(cfg.unit_report))},
          {"time_unit", time_unit(cfg.unit_report)},
          {"gamma_si", units::kGammaSI}};
}

double omega_ro(const collective::LadderParams& p) {
  return std::sqrt(static_cast<double>(p.n_atoms)) * p.omega1 * p.omega2 / (2.0 * std::abs(p.common_detuning()));
}

struct BlockadeOutcome {
  dynamics::TrajectoryRecord trajectory;
  std::optional<dynamics::RabiFit> fit;
};

BlockadeOutcome blockade_trajectory(const LadderBlock& block, double duration, double step) {
  const auto params = block.params();
  if (block.blockade == collective::BlockadeTerm::zero) {
    const auto h = collective::balanced_effective(params, collective::BlockadeTerm::zero).matrix;
    auto traj = dynamics::simulate(h, dynamics::QuantumState::basis_state(h.basis, "A"), duration, step);
    return {std::move(traj), std::nullopt};
  }
  return {dynamics::simulate_blockade(params, duration, step, dynamics::DetuningPolicy::as_given), std::nullopt};
}

RunResult run_blockade(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto& block = *cfg.ladder;
  const auto params = block.params();
  auto outcome = blockade_trajectory(block, cfg.duration, cfg.sample_step);
  const auto& traj = outcome.trajectory;
  const auto fit = dynamics::fit_rabi(traj, "C1");

  RunResult result;
  {
    std::ostringstream csv;
    traj.write_csv(csv, time_scale(cfg.unit_report));
    const auto path = dir / cfg.output.trajectory;
    write_file(path, csv.str());
    result.artifacts.push_back(path);
  }

  const double scale = time_scale(cfg.unit_report);
  Json j = header(cfg);
  j["ladder"] = report::ladder_json(params);
  j["resonant_two_photon_detuning"] = !block.two_photon_detuning.has_value();
  j["blockade_term"] = block.blockade == collective::BlockadeTerm::keep ? "keep" : "zero";
  j["light_shifts_first_order"] = report::light_shifts_json(collective::light_shifts(params));
  j["light_shifts_dressed"] = report::dressed_shifts_json(collective::dressed_light_shifts(params));
  j["blockade_shift_numeric"] = collective::blockade_shift_numeric(params);
  j["omega_ro"] = omega_ro(params);
  j["pi_time_analytic"] = units::kPi / omega_ro(params) * scale;
  j["rabi_fit"] = {{"label", "C1"},
                   {"first_pi_time", fit.first_pi_time * scale},
                   {"frequency", fit.frequency},
                   {"contrast", fit.contrast}};
  j["duration"] = cfg.duration * scale;
  j["sample_step"] = cfg.sample_step * scale;
  j["samples"] = traj.times.size();
  Json max_pop = Json::object();
  Json final_pop = Json::object();
  for (const auto& label : traj.labels) {
    max_pop[label] = traj.max_population(label);
    final_pop[label] = traj.series(label).back();
  }
  j["max_population"] = max_pop;
  j["final_population"] = final_pop;
  result.artifacts.push_back(write_json(dir, cfg.output.report, j));

  const double pi_us = units::gamma_time_to_seconds(fit.first_pi_time) * 1e6;
  result.summary = "pi_time=" + fmt("%.1f", pi_us) + "us max_P_C1=" + fmt("%.3f", traj.max_population("C1")) +
                   " max_P_C2=" + fmt("%.3f", traj.max_population("C2"));
  return result;
}

RunResult run_ladder_spectrum(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto params = cfg.ladder->params();
  const auto full = collective::build_full_ladder(params);
  const auto eff = collective::adiabatic_eliminate(params);
  const auto full_vals = full.eigenvalues();
  const auto eff_vals = eff.matrix.eigenvalues();

  Json matches = Json::array();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < eff_vals.size(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < full_vals.size(); ++k) {
      if (std::abs(full_vals(k) - eff_vals(i)) < std::abs(full_vals(best) - eff_vals(i))) best = k;
    }
    const double rel = std::abs(full_vals(best) - eff_vals(i)) / std::max(std::abs(full_vals(best)), 1e-300);
    worst = std::max(worst, rel);
    matches.push_back({{"effective", eff_vals(i)}, {"full", full_vals(best)}, {"relative_error", rel}});
  }

  Json j = header(cfg);
  j["ladder"] = report::ladder_json(params);
  j["basis"] = full.basis;
  j["full_eigenvalues"] = std::vector<double>(full_vals.data(), full_vals.data() + full_vals.size());
  j["effective_eigenvalues"] = std::vector<double>(eff_vals.data(), eff_vals.data() + eff_vals.size());
  j["matches"] = matches;
  j["max_relative_error"] = worst;
  j["regime_warning"] = eff.regime_warning;
  j["light_shifts_first_order"] = report::light_shifts_json(collective::light_shifts(params));
  j["light_shifts_dressed"] = report::dressed_shifts_json(collective::dressed_light_shifts(params));
  j["blockade_shift_numeric"] = collective::blockade_shift_numeric(params);

  RunResult result;
  result.artifacts.push_back(write_json(dir, cfg.output.report, j));
  result.summary = "max_rel_err=" + fmt("%.3e", worst) + " blockade_shift=" +
                   fmt("%.6g", collective::blockade_shift_numeric(params)) +
                   (eff.regime_warning ? " regime_warning=true" : " regime_warning=false");
  return result;
}

RunResult run_cnot_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto& block = *cfg.cnot;
  const auto gate = protocol::run_cnot(block.inputs, block.params, cfg.mode);

  Json j = header(cfg);
  j["parameters"] = {{"n_atoms", block.params.n_atoms},
                     {"delta", block.params.delta},
                     {"omega1", block.params.omega1},
                     {"omega2", block.params.omega2},
                     {"omega1_prime", block.params.omega1_prime},
                     {"omega2_prime", block.params.omega2_prime},
                     {"omega_i", block.params.omega_i},
                     {"omega_ii", block.params.omega_ii},
                     {"g_c", block.params.g_c},
                     {"detuning_sign", block.params.detuning_sign}};
  j["gate"] = report::gate_json(gate, cfg.unit_report);

  std::string coincidence_text = "n/a";
  try {
    const auto c = protocol::coincidence_probabilities(gate.final_state);
    j["coincidence"] = {{"p_photon1", c.p_photon1}, {"p_photon2", c.p_photon2}, {"p_coincidence", c.p_coincidence}};
    coincidence_text = fmt("%.6f", c.p_coincidence);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::precondition) throw;
    j["coincidence"] = nullptr;
    j["coincidence_skipped"] = e.what();
  }
  double total = 0.0;
  for (const auto& s : gate.steps) total += s.duration;
  j["total_duration"] = total * time_scale(cfg.unit_report);

  RunResult result;
  result.artifacts.push_back(write_json(dir, cfg.output.report, j));
  result.summary = "fidelity=" + fmt("%.6f", gate.fidelity_vs_target) + " p_coincidence=" + coincidence_text +
                   " gate_time=" + fmt("%.1f", units::gamma_time_to_seconds(total) * 1e6) + "us";
  return result;
}

RunResult run_interlink_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto& block = *cfg.interlink;
  const auto link = protocol::run_interlink(block.alpha, block.beta, block.with_ancilla, block.params, cfg.mode);

  Json j = header(cfg);
  j["parameters"] = {{"n_atoms", block.params.n_atoms},
                     {"delta", block.params.delta},
                     {"omega_read", block.params.omega_read},
                     {"omega_write", block.params.omega_write},
                     {"g_f", block.params.g_f},
                     {"transit_time", block.params.transit_time * time_scale(cfg.unit_report)},
                     {"detuning_sign", block.params.detuning_sign},
                     {"with_ancilla", block.with_ancilla}};
  j["gate"] = report::gate_json(link, cfg.unit_report);

  RunResult result;
  result.artifacts.push_back(write_json(dir, cfg.output.report, j));
  result.summary = "fidelity=" + fmt("%.6f", link.fidelity_vs_target);
  if (link.entanglement_entropy) result.summary += " entropy_bits=" + fmt("%.6f", *link.entanglement_entropy);
  return result;
}

RunResult run_cavity_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto& block = *cfg.cavity;
  const auto figures = cavity::cavity_figures(block.geometry);
  const double omega = 2.0 * units::kPi * units::kSpeedOfLight / block.wavelength;
  const double g_single = cavity::first_principles_g(omega, figures.mode_volume, block.dipole_moment);
  const double g_scaled_single = figures.g / std::sqrt(static_cast<double>(block.geometry.n_atoms));

  Json j = header(cfg);
  j.update(report::cavity_json(block.geometry, figures));
  j["first_principles"] = {{"dipole_moment_cm", block.dipole_moment},
                           {"wavelength_m", block.wavelength},
                           {"g_single_atom", g_single},
                           {"ratio_to_scaled_anchor", g_single / g_scaled_single}};

  std::string feasibility_text;
  if (cfg.ladder) {
    const auto f = cavity::gate_feasibility(block.geometry, cfg.ladder->params());
    j["gate_feasibility"] = {{"ladder", report::ladder_json(cfg.ladder->params())},
                             {"pi_time_s", f.pi_time_s},
                             {"lifetime_s", f.lifetime_s},
                             {"ratio", f.ratio},
                             {"feasible", f.feasible}};
    feasibility_text = std::string(" feasible=") + (f.feasible ? "true" : "false");
  }

  RunResult result;
  result.artifacts.push_back(write_json(dir, cfg.output.report, j));
  result.summary = "g=" + fmt("%.4g", figures.g) + " finesse=" + fmt("%.4g", figures.finesse) +
                   " fsr_hz=" + fmt("%.4g", figures.fsr) + " gamma_hwhm=" + fmt("%.4g", figures.gamma_hwhm) +
                   " lifetime=" + fmt("%.4g", figures.lifetime) + "s" + feasibility_text;
  return result;
}

int as_atom_count(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || r < 1.0 || r > std::numeric_limits<int>::max()) {
    throw Error(ErrorKind::invalid_parameter, "swept n_atoms value " + fmt("%.17g", v) + " is not a positive integer");
  }
  return static_cast<int>(r);
}

std::vector<double> sweep_row_blockade(const ExperimentConfig& cfg, const std::string& key, double v) {
  LadderBlock block = *cfg.ladder;
  if (key == "n_atoms") block.n_atoms = as_atom_count(v);
  else if (key == "omega1") block.omega1 = v;
  else if (key == "omega2") block.omega2 = v;
  else if (key == "delta") block.delta = v;
  else if (key == "two_photon_detuning") block.two_photon_detuning = v;
  block.truncation = std::min(block.truncation, block.n_atoms);

  const auto params = block.params();
  const auto outcome = blockade_trajectory(block, cfg.duration, cfg.sample_step);
  double pi_time = std::numeric_limits<double>::quiet_NaN();
  try {
    pi_time = dynamics::fit_rabi(outcome.trajectory, "C1").first_pi_time * time_scale(cfg.unit_report);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::fit_failure) throw;
  }
  return {omega_ro(params), pi_time, outcome.trajectory.max_population("C1"),
          outcome.trajectory.max_population("C2"), collective::blockade_shift_numeric(params)};
}

std::vector<double> sweep_row_cavity(const ExperimentConfig& cfg, const std::string& key, double v) {
  auto geom = cfg.cavity->geometry;
  if (key == "length") geom.length = v;
  else if (key == "mode_diameter") geom.mode_diameter = v;
  else if (key == "mirror_transmittivity") geom.mirror_transmittivity = v;
  else if (key == "n_atoms") geom.n_atoms = as_atom_count(v);
  const auto f = cavity::cavity_figures(geom);
  return {f.g, f.finesse, f.fsr, f.gamma_hwhm, f.lifetime};
}

RunResult run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto& sweep = *cfg.sweep;
  const bool blockade = sweep.base == ExperimentType::blockade;
  const std::string key = sweep.parameter.substr(sweep.parameter.find('.') + 1);
  const auto values = sweep.values();
  const std::vector<std::string> columns =
      blockade ? std::vector<std::string>{"omega_ro", "pi_time", "max_P_C1", "max_P_C2", "blockade_shift"}
               : std::vector<std::string>{"g", "finesse", "fsr_hz", "gamma_hwhm", "lifetime_s"};

  std::vector<std::vector<double>> rows(values.size());
  std::vector<std::exception_ptr> failures(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        rows[i] = blockade ? sweep_row_blockade(cfg, key, values[i]) : sweep_row_cavity(cfg, key, values[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  unsigned n_threads = sweep.threads ? sweep.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, values.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::ostringstream csv;
  csv << "index," << sweep.parameter;
  for (const auto& c : columns) csv << ',' << c;
  csv << '\n';
  std::size_t fit_failures = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv << i << ',' << fmt("%.15g", values[i]);
    for (double x : rows[i]) {
      if (std::isnan(x)) ++fit_failures;
      csv << ',' << (std::isnan(x) ? std::string("nan") : fmt("%.15g", x));
    }
    csv << '\n';
  }

  RunResult result;
  const auto csv_path = dir / cfg.output.sweep;
  write_file(csv_path, csv.str());
  result.artifacts.push_back(csv_path);

  Json j = header(cfg);
  j["base"] = std::string(name(sweep.base));
  j["parameter"] = sweep.parameter;
  j["scale"] = sweep.scale == SweepScale::log ? "log" : "linear";
  j["values"] = values;
  j["columns"] = columns;
  if (blockade) {
    j["ladder"] = report::ladder_json(cfg.ladder->params());
    j["duration"] = cfg.duration * time_scale(cfg.unit_report);
    j["sample_step"] = cfg.sample_step * time_scale(cfg.unit_report);
    j["fit_failures"] = fit_failures;
  } else {
    j.update(report::cavity_json(cfg.cavity->geometry, cavity::cavity_figures(cfg.cavity->geometry)));
  }
  result.artifacts.push_back(write_json(dir, cfg.output.report, j));
  result.summary = "points=" + std::to_string(values.size()) + " parameter=" + sweep.parameter +
                   (blockade ? " fit_failures=" + std::to_string(fit_failures) : std::string());
  return result;
}

}  // namespace

std::string_view name(ExperimentType type) {
  switch (type) {
    case ExperimentType::blockade: return "blockade";
    case ExperimentType::ladder_spectrum: return "ladder-spectrum";
    case ExperimentType::cnot: return "cnot";
    case ExperimentType::interlink: return "interlink";
    case ExperimentType::cavity: return "cavity";
    case ExperimentType::sweep: return "sweep";
  }
  return "?";
}

std::string_view name(UnitReport units) { return units == UnitReport::si ? "si" : "gamma-units"; }

collective::LadderParams LadderBlock::params() const {
  if (two_photon_detuning) {
    auto p = collective::LadderParams::from_common(n_atoms, omega1, omega2, delta, *two_photon_detuning, truncation,
                                                   trailing_g);
    p.validate();
    return p;
  }
  const double resonant = collective::resonant_two_photon_detuning(n_atoms, omega1, omega2, delta);
  auto p = collective::LadderParams::from_common(n_atoms, omega1, omega2, delta, resonant, truncation, trailing_g);
  p.validate();
  return p;
}

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw Error(ErrorKind::numerical, "cannot create output directory " + output_dir.string() + ": " + ec.message());

  switch (config.type) {
    case ExperimentType::blockade: return run_blockade(config, output_dir);
    case ExperimentType::ladder_spectrum: return run_ladder_spectrum(config, output_dir);
    case ExperimentType::cnot: return run_cnot_experiment(config, output_dir);
    case ExperimentType::interlink: return run_interlink_experiment(config, output_dir);
    case ExperimentType::cavity: return run_cavity_experiment(config, output_dir);
    case ExperimentType::sweep: return run_sweep(config, output_dir);
  }
  throw Error(ErrorKind::config, "unsupported experiment type");
}

}  // namespace lsiib::experiment
