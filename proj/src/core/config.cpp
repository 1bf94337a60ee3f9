#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lsiib/errors.hpp"
#include "lsiib/experiment.hpp"

namespace lsiib::experiment {

namespace {

using boost::property_tree::ptree;
using Check = std::function<std::string(double)>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(std::string_view text) {
  const auto s = trim(text);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Check positive() {
  return [](double v) { return v > 0.0 ? std::string() : "must be > 0"; };
}
Check non_negative() {
  return [](double v) { return v >= 0.0 ? std::string() : "must be >= 0"; };
}
Check any_value() {
  return [](double) { return std::string(); };
}

// Reads one INI section, remembering which keys were consumed so the rest
// can be reported as unknown.
class Section {
 public:
  Section(const ptree* node, std::string name, std::vector<std::string>& issues)
      : node_(node), name_(std::move(name)), issues_(issues) {}

  std::optional<std::string> raw(const std::string& key) {
    seen_.insert(key);
    if (!node_) return std::nullopt;
    const auto child = node_->get_child_optional(ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  void issue(const std::string& key, const std::string& message) {
    issues_.push_back(name_ + "." + key + ": " + message);
  }

  std::optional<double> number(const std::string& key, bool required, const Check& check = any_value()) {
    const auto text = raw(key);
    if (!text) {
      if (required) issue(key, "missing required key");
      return std::nullopt;
    }
    const auto v = to_double(*text);
    if (!v) {
      issue(key, "'" + *text + "' is not a finite number");
      return std::nullopt;
    }
    if (auto msg = check(*v); !msg.empty()) {
      issue(key, msg + " (got " + *text + ")");
      return std::nullopt;
    }
    return v;
  }

  double number_or(const std::string& key, double fallback, const Check& check = any_value()) {
    return number(key, false, check).value_or(fallback);
  }

  std::optional<int> integer(const std::string& key, bool required, int min_value) {
    const auto text = raw(key);
    if (!text) {
      if (required) issue(key, "missing required key");
      return std::nullopt;
    }
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
    if (ec != std::errc() || ptr != text->data() + text->size()) {
      issue(key, "'" + *text + "' is not an integer");
      return std::nullopt;
    }
    if (v < min_value) {
      issue(key, "must be >= " + std::to_string(min_value) + " (got " + *text + ")");
      return std::nullopt;
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto text = raw(key);
    if (!text) return fallback;
    if (*text == "true" || *text == "1" || *text == "yes") return true;
    if (*text == "false" || *text == "0" || *text == "no") return false;
    issue(key, "'" + *text + "' is not a boolean (true/false)");
    return fallback;
  }

  // "re" or "re,im".
  std::optional<lsiib::Complex> complex(const std::string& key, bool required) {
    const auto text = raw(key);
    if (!text) {
      if (required) issue(key, "missing required key");
      return std::nullopt;
    }
    const auto comma = text->find(',');
    const auto re = to_double(text->substr(0, comma));
    const auto im = comma == std::string::npos ? std::optional<double>(0.0) : to_double(text->substr(comma + 1));
    if (!re || !im) {
      issue(key, "'" + *text + "' is not a complex number (re or re,im)");
      return std::nullopt;
    }
    return lsiib::Complex(*re, *im);
  }

  template <typename Enum>
  std::optional<Enum> choice(const std::string& key, bool required,
                             const std::vector<std::pair<std::string, Enum>>& options) {
    const auto text = raw(key);
    if (!text) {
      if (required) issue(key, "missing required key");
      return std::nullopt;
    }
    std::string allowed;
    for (const auto& [label, value] : options) {
      if (*text == label) return value;
      allowed += (allowed.empty() ? "" : ", ") + label;
    }
    issue(key, "'" + *text + "' is not one of {" + allowed + "}");
    return std::nullopt;
  }

  void reject_unknown() {
    if (!node_) return;
    for (const auto& [key, child] : *node_) {
      if (!seen_.count(key)) issue(key, "unknown key");
    }
  }

 private:
  const ptree* node_;
  std::string name_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

const std::vector<std::pair<std::string, ExperimentType>> kTypes = {
    {"blockade", ExperimentType::blockade}, {"ladder-spectrum", ExperimentType::ladder_spectrum},
    {"cnot", ExperimentType::cnot},         {"interlink", ExperimentType::interlink},
    {"cavity", ExperimentType::cavity},     {"sweep", ExperimentType::sweep}};

const std::vector<std::string> kSections = {"experiment", "output", "ladder", "cnot", "interlink", "cavity", "sweep"};

const std::vector<std::string> kBlockadeSweepKeys = {"n_atoms", "omega1", "omega2", "delta", "two_photon_detuning"};
const std::vector<std::string> kCavitySweepKeys = {"length", "mode_diameter", "mirror_transmittivity", "n_atoms"};

LadderBlock read_ladder(Section& s) {
  LadderBlock b;
  const auto n = s.integer("n_atoms", true, 1);
  b.n_atoms = n.value_or(1);
  b.omega1 = s.number("omega1", true, non_negative()).value_or(0.0);
  b.omega2 = s.number("omega2", true, non_negative()).value_or(0.0);
  b.delta = s.number("delta", true, [](double v) { return v != 0.0 ? std::string() : "must be nonzero"; })
                .value_or(1.0);
  if (const auto text = s.raw("two_photon_detuning"); text && *text != "resonant") {
    b.two_photon_detuning = s.number("two_photon_detuning", true);
  }
  const auto t = s.integer("truncation", false, 1);
  b.truncation = t.value_or(std::min(2, b.n_atoms));
  if (n && t && *t > *n) {
    s.issue("truncation", std::to_string(*t) + " exceeds ladder.n_atoms = " + std::to_string(*n));
  }
  b.trailing_g = s.boolean("trailing_g", true);
  b.blockade = s.choice<collective::BlockadeTerm>("blockade", false,
                                                  {{"keep", collective::BlockadeTerm::keep},
                                                   {"zero", collective::BlockadeTerm::zero}})
                   .value_or(collective::BlockadeTerm::keep);
  return b;
}

CnotBlock read_cnot(Section& s) {
  CnotBlock b;
  auto& p = b.params;
  p.n_atoms = s.integer("n_atoms", true, 1).value_or(1);
  p.delta = s.number("delta", true, positive()).value_or(1.0);
  p.omega1 = s.number("omega1", true, positive()).value_or(1.0);
  p.omega2 = s.number("omega2", true, positive()).value_or(1.0);
  p.omega1_prime = s.number("omega1_prime", true, positive()).value_or(1.0);
  p.omega2_prime = s.number("omega2_prime", true, positive()).value_or(1.0);
  p.omega_i = s.number("omega_i", true, positive()).value_or(1.0);
  p.omega_ii = s.number("omega_ii", true, positive()).value_or(1.0);
  p.g_c = s.number("g_c", true, positive()).value_or(1.0);
  p.detuning_sign = s.choice<int>("detuning_sign", false, {{"1", 1}, {"+1", 1}, {"-1", -1}}).value_or(1);
  b.inputs.alpha = s.complex("alpha", true).value_or(1.0);
  b.inputs.beta = s.complex("beta", true).value_or(0.0);
  b.inputs.xi = s.complex("xi", true).value_or(1.0);
  b.inputs.eta = s.complex("eta", true).value_or(0.0);
  return b;
}

InterlinkBlock read_interlink(Section& s) {
  InterlinkBlock b;
  auto& p = b.params;
  p.n_atoms = s.integer("n_atoms", true, 1).value_or(1);
  p.delta = s.number("delta", true, positive()).value_or(1.0);
  p.omega_read = s.number("omega_read", true, positive()).value_or(1.0);
  p.omega_write = s.number("omega_write", true, positive()).value_or(1.0);
  p.g_f = s.number("g_f", true, positive()).value_or(1.0);
  p.transit_time = s.number_or("transit_time", 0.0, non_negative());
  p.detuning_sign = s.choice<int>("detuning_sign", false, {{"1", 1}, {"+1", 1}, {"-1", -1}}).value_or(1);
  b.alpha = s.complex("alpha", true).value_or(1.0);
  b.beta = s.complex("beta", true).value_or(0.0);
  b.with_ancilla = s.boolean("with_ancilla", false);
  return b;
}

CavityBlock read_cavity(Section& s) {
  CavityBlock b;
  auto& g = b.geometry;
  g.length = s.number("length", true, positive()).value_or(1.0);
  g.mode_diameter = s.number("mode_diameter", true, positive()).value_or(1.0);
  g.mirror_transmittivity =
      s.number("mirror_transmittivity", true, [](double v) {
         return v > 0.0 && v < 1.0 ? std::string() : "must lie in (0, 1)";
       }).value_or(0.5);
  g.n_atoms = s.integer("n_atoms", true, 1).value_or(1);
  g.anchor.g0 = s.number_or("anchor_g0", g.anchor.g0, positive());
  g.anchor.length = s.number_or("anchor_length", g.anchor.length, positive());
  g.anchor.diameter = s.number_or("anchor_diameter", g.anchor.diameter, positive());
  b.dipole_moment = s.number_or("dipole_moment", b.dipole_moment, positive());
  b.wavelength = s.number_or("wavelength", b.wavelength, positive());
  return b;
}

SweepBlock read_sweep(Section& s) {
  SweepBlock b;
  b.base = s.choice<ExperimentType>("base", true, {{"blockade", ExperimentType::blockade},
                                                   {"cavity", ExperimentType::cavity}})
               .value_or(ExperimentType::blockade);
  const auto param = s.raw("parameter");
  if (!param) {
    s.issue("parameter", "missing required key");
  } else {
    b.parameter = *param;
    const bool blockade = b.base == ExperimentType::blockade;
    const auto& keys = blockade ? kBlockadeSweepKeys : kCavitySweepKeys;
    const std::string prefix = blockade ? "ladder." : "cavity.";
    bool ok = false;
    for (const auto& k : keys) ok = ok || b.parameter == prefix + k;
    if (!ok) {
      std::string allowed;
      for (const auto& k : keys) allowed += (allowed.empty() ? "" : ", ") + prefix + k;
      s.issue("parameter", "'" + b.parameter + "' cannot be swept for this base (allowed: " + allowed + ")");
    }
  }
  const auto start = s.number("start", true);
  const auto stop = s.number("stop", true);
  b.start = start.value_or(0.0);
  b.stop = stop.value_or(0.0);
  b.points = s.integer("points", true, 1).value_or(1);
  b.scale = s.choice<SweepScale>("scale", false, {{"linear", SweepScale::linear}, {"log", SweepScale::log}})
                .value_or(SweepScale::linear);
  if (b.scale == SweepScale::log && start && stop && (*start <= 0.0 || *stop <= 0.0)) {
    s.issue("scale", "log scale needs sweep.start and sweep.stop > 0");
  }
  b.threads = static_cast<unsigned>(s.integer("threads", false, 0).value_or(0));
  return b;
}

}  // namespace

std::vector<double> SweepBlock::values() const {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    if (scale == SweepScale::log) {
      v.push_back(start * std::pow(stop / start, f));
    } else {
      v.push_back(start + (stop - start) * f);
    }
  }
  return v;
}

ExperimentConfig parse_config(std::string_view text) {
  ptree root;
  try {
    std::istringstream in{std::string(text)};
    boost::property_tree::ini_parser::read_ini(in, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
  }

  std::vector<std::string> issues;
  for (const auto& [key, child] : root) {
    if (child.empty() && !child.data().empty()) {
      issues.push_back(key + ": key outside any section");
    } else if (std::find(kSections.begin(), kSections.end(), key) == kSections.end()) {
      issues.push_back(key + ": unknown section");
    }
  }
  auto node = [&](const std::string& name) -> const ptree* {
    const auto child = root.get_child_optional(ptree::path_type(name, '\0'));
    return child ? &*child : nullptr;
  };

  ExperimentConfig cfg;
  Section exp(node("experiment"), "experiment", issues);
  if (!node("experiment")) issues.push_back("experiment: missing section");
  cfg.type = exp.choice<ExperimentType>("type", true, kTypes).value_or(ExperimentType::blockade);
  cfg.mode = exp.choice<protocol::ProtocolMode>("mode", false,
                                                {{"ideal", protocol::ProtocolMode::ideal},
                                                 {"chain", protocol::ProtocolMode::chain},
                                                 {"strict", protocol::ProtocolMode::strict}})
                 .value_or(protocol::ProtocolMode::ideal);
  cfg.unit_report =
      exp.choice<UnitReport>("unit_report", false, {{"gamma-units", UnitReport::gamma_units}, {"si", UnitReport::si}})
          .value_or(UnitReport::gamma_units);

  const bool sweeping = cfg.type == ExperimentType::sweep;
  std::optional<SweepBlock> sweep;
  if (node("sweep")) {
    Section s(node("sweep"), "sweep", issues);
    sweep = read_sweep(s);
    s.reject_unknown();
  }
  const ExperimentType effective = sweeping && sweep ? sweep->base : cfg.type;
  const bool needs_timing = effective == ExperimentType::blockade && (cfg.type == ExperimentType::blockade || sweeping);
  if (needs_timing) {
    cfg.duration = exp.number("duration", true, positive()).value_or(1.0);
    cfg.sample_step = exp.number("sample_step", true, positive()).value_or(1.0);
    if (cfg.sample_step > cfg.duration) exp.issue("sample_step", "exceeds experiment.duration");
  }
  exp.reject_unknown();

  if (const auto* out = node("output")) {
    Section s(out, "output", issues);
    if (auto v = s.raw("trajectory")) cfg.output.trajectory = *v;
    if (auto v = s.raw("report")) cfg.output.report = *v;
    if (auto v = s.raw("sweep")) cfg.output.sweep = *v;
    s.reject_unknown();
  }

  // Which parameter blocks each experiment reads; the cavity experiment
  // also accepts an optional [ladder] for the gate-feasibility check.
  std::set<std::string> required, optional;
  switch (cfg.type) {
    case ExperimentType::blockade:
    case ExperimentType::ladder_spectrum: required = {"ladder"}; break;
    case ExperimentType::cnot: required = {"cnot"}; break;
    case ExperimentType::interlink: required = {"interlink"}; break;
    case ExperimentType::cavity: required = {"cavity"}; optional = {"ladder"}; break;
    case ExperimentType::sweep:
      required = {"sweep", effective == ExperimentType::cavity ? "cavity" : "ladder"};
      break;
  }
  for (const auto& name : {"ladder", "cnot", "interlink", "cavity", "sweep"}) {
    const bool present = node(name) != nullptr;
    const bool wanted = required.count(name) || optional.count(name);
    if (!present && required.count(name)) {
      issues.push_back(std::string(name) + ": missing section required by experiment '" +
                       std::string(experiment::name(cfg.type)) + "'");
    } else if (present && !wanted) {
      issues.push_back(std::string(name) + ": section not used by experiment '" +
                       std::string(experiment::name(cfg.type)) + "'");
    }
  }

  if (node("ladder")) {
    Section s(node("ladder"), "ladder", issues);
    cfg.ladder = read_ladder(s);
    s.reject_unknown();
  }
  if (node("cnot")) {
    Section s(node("cnot"), "cnot", issues);
    cfg.cnot = read_cnot(s);
    s.reject_unknown();
  }
  if (node("interlink")) {
    Section s(node("interlink"), "interlink", issues);
    cfg.interlink = read_interlink(s);
    s.reject_unknown();
  }
  if (node("cavity")) {
    Section s(node("cavity"), "cavity", issues);
    cfg.cavity = read_cavity(s);
    s.reject_unknown();
  }
  cfg.sweep = sweep;

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace lsiib::experiment
