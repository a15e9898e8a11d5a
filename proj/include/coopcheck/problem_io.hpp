#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopcheck/model.hpp"

namespace coopcheck {

// ---- problem file format ---------------------------------------------------
//
// {
//   "agents": ["agent1","agent2"],
//   "variables": [{"name":"location(agent1)","domain":["room1","room2"],
//                  "agent":"agent1"}, ...],
//   "actions": [{"name":"Steal(agent1,diamond1,room1,door1)","agent":"agent1",
//                "pre":{...},"post":{...},"prv":{...},
//                "checked_pre":["..."]}, ...],
//   "init": {...},
//   "goal": {...}
// }
//
// Omitted variables in pre/post/prv mean u. The serializer emits keys in
// declaration order.

MapProblem parse_problem(const std::string &text);
MapProblem load_problem(const std::string &path);
std::string serialize_problem(const MapProblem &problem);
void save_problem(const MapProblem &problem, const std::string &path);

// ---- built-in fixtures -----------------------------------------------------

MapProblem fixture_diamond();
MapProblem fixture_oneway_grid();
MapProblem fixture_oneway_grid_gas_diesel();
MapProblem fixture_free_grid();
MapProblem fixture_logistics_mini();
MapProblem fixture_logistics_single_city();
MapProblem fixture_figure3();

std::vector<std::string> fixture_names();
MapProblem fixture_by_name(const std::string &name);

// ---- reduction gadget ------------------------------------------------------

// Two-agent probe: a fresh agent gets one action that achieves the goal
// directly but needs a fresh fluent, which only an initially applicable
// action of the original agent can set. The probe is solvable by
// construction, and it requires cooperation exactly when the input is
// unsolvable.
MapProblem build_rc_probe(const MapProblem &single_agent_problem);

// ---- random instances ------------------------------------------------------

struct GeneratorProfile {
    int min_agents = 2;
    int max_agents = 3;       // <= 4
    int max_extra_vars = 3;   // non-agent variables, <= 6
    int max_domain = 3;       // <= 4 values per domain
    int max_schemas = 6;      // <= 12 action schemas
    bool homogeneous = true;
    // Percentage chance that a schema carries a prevail condition on the
    // agent position / on another world variable.
    int agent_prv_percent = 40;
    int var_prv_percent = 25;
    // Percentage chance that a world-updating schema updates two variables.
    int co_update_percent = 15;
    // Add schemas that cycle every updated variable through its whole
    // domain (keeps state spaces traversable).
    bool full_value_cycles = false;
};

MapProblem random_instance(std::uint64_t seed, const GeneratorProfile &profile);

}  // namespace coopcheck
