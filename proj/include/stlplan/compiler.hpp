#pragma once

#include <string>
#include <vector>

#include "stlplan/mission.hpp"
#include "stlplan/stl.hpp"

namespace stlplan {

/// Binds a mathematical symbol of the mission formula to the spec field or
/// generated node that realises it.
struct SymbolBinding {
  std::string symbol;
  std::string binding;
};

struct CompiledMission {
  Formula formula;
  std::vector<std::string> channels;  // joint fleet signal layout
  std::size_t steps = 0;              // N; the signal needs N + 1 samples
  std::vector<SymbolBinding> symbols;
};

/// Conjunction of the six half-space predicates bounding `region`, over the
/// position channels of `vehicle`.
Formula box_membership_predicates(const Box3& region, std::size_t vehicle, const std::string& label = {});

/// Disjunction of the six half-space exits of `region`.
Formula box_exclusion_predicates(const Box3& region, std::size_t vehicle, const std::string& label = {});

/// ||p_a - p_b|| >= threshold on the joint signal.
Formula separation_formula(std::size_t vehicle_a, std::size_t vehicle_b, double threshold);

/// Builds the full mission formula. Requires a fixed horizon and a home region
/// for every vehicle (see assign_homes).
CompiledMission compile(const MissionSpec& spec);

/// Closed-form node count of compile(spec), used as a structural check.
std::size_t expected_node_count(const MissionSpec& spec);

}  // namespace stlplan
