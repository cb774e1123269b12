#pragma once

#include <nlohmann/json.hpp>

#include "finegrain/constants.hpp"
#include "finegrain/dynamics.hpp"
#include "finegrain/estimators.hpp"
#include "finegrain/hilbert.hpp"
#include "finegrain/log_quantity.hpp"
#include "finegrain/measurement.hpp"
#include "finegrain/resources.hpp"

namespace fg {

using json = nlohmann::json;

json to_json(const LogQuantity& q);
LogQuantity log_quantity_from_json(const json& j);

json to_json(const PureState& s);
PureState pure_state_from_json(const json& j);

json to_json(const PhysicalConstants& pc);
PhysicalConstants constants_from_json(const json& j);
PhysicalConstants load_constants(const std::string& path);

json to_json(const StabilityVerdict& v);

json to_json(const HamiltonianSpec& h);
HamiltonianSpec hamiltonian_from_json(const json& j);

json to_json(const LindbladSpec& l);
LindbladSpec lindblad_from_json(const json& j);

json to_json(const ChainSpec& c);
ChainSpec chain_from_json(const json& j);

json to_json(const TransitionBasis& b);
TransitionBasis transition_basis_from_json(const json& j);

json to_json(const TransitionConfig& c);
/// dims are needed to expand the default candidate set when none is given.
TransitionConfig transition_config_from_json(const json& j, const std::vector<int>& dims);

json to_json(const TransitionRecord& r);

json to_json(const EstimateReport& r);

} // namespace fg
