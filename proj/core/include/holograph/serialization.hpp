#pragma once

#include <nlohmann/json.hpp>

#include "holograph/causal_state.hpp"
#include "holograph/objective.hpp"
#include "holograph/sheaf.hpp"

namespace holograph {

using json = nlohmann::json;

/// {"context": [...], "W": row-major, "L": row-major}; exact round trip for
/// finite doubles.
json state_to_json(const CausalState& state);
CausalState state_from_json(const json& j);

json loss_to_json(const LossBreakdown& loss);
LossBreakdown loss_from_json(const json& j);

json axiom_report_to_json(const AxiomReport& report);

}  // namespace holograph
