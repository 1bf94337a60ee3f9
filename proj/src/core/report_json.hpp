#pragma once

#include <json.hpp>

#include "lsiib/cavity_design.hpp"
#include "lsiib/collective_model.hpp"
#include "lsiib/experiment.hpp"
#include "lsiib/gate_protocol.hpp"

namespace lsiib::report {

using Json = nlohmann::ordered_json;

Json complex_pair(lsiib::Complex z);
// Nonzero amplitudes keyed by basis label, plus the layout.
Json state_json(const protocol::RegisterState& state);
Json ladder_json(const collective::LadderParams& params);
Json light_shifts_json(const collective::LightShifts& shifts);
Json dressed_shifts_json(const collective::DressedShifts& shifts);
Json cavity_json(const cavity::CavityGeometry& geom, const cavity::CavityFigures& figures);
Json gate_json(const protocol::GateReport& report, experiment::UnitReport units);

}  // namespace lsiib::report
