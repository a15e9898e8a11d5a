#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopcheck/model.hpp"
#include "coopcheck/oracle.hpp"

namespace coopcheck {

// Variable signature: the owning agent's reference in the name is replaced
// by EX-AG; agent names occurring as domain values map to EX-AG as well,
// with duplicates removed. Non-agent variables keep their token.
struct VariableSignature {
    std::string token;
    std::vector<std::string> domain;
    bool operator==(const VariableSignature &other) const = default;
};

VariableSignature variable_signature(const MapProblem &problem, int var);
// Checked form: `owner` must be the variable's agent (or the variable is
// non-agent).
VariableSignature variable_signature(const MapProblem &problem, int var,
                                     const std::string &owner);

// Action signature: every occurrence of the owning agent's token in the
// action name, condition variable names and condition values is replaced
// by EX-AG. Condition lists are sorted by variable token.
struct ActionSignature {
    std::string name;
    std::vector<std::pair<std::string, std::string>> pre;
    std::vector<std::pair<std::string, std::string>> post;
    std::vector<std::pair<std::string, std::string>> prv;

    std::string canonical() const;
    bool operator==(const ActionSignature &other) const = default;
};

ActionSignature action_signature(const MapProblem &problem,
                                 const Action &action);

// ---- heterogeneity ---------------------------------------------------------

// Witness lists are indexed like problem.agents. DH witnesses are variable
// names whose signature domain is not covered by the other agents'
// same-signature variables; a signature no other agent has at all is left
// to VH.
std::vector<std::vector<std::string>> check_dh(const MapProblem &problem);
// VH witnesses: VS tokens of the agent that no other agent possesses.
std::vector<std::vector<std::string>> check_vh(const MapProblem &problem);
// CH witnesses: canonical action signatures no other agent possesses.
std::vector<std::vector<std::string>> check_ch(const MapProblem &problem);

struct HeterogeneityReport {
    std::vector<std::string> agents;
    std::vector<std::vector<std::string>> dh_witnesses;
    std::vector<std::vector<std::string>> vh_witnesses;
    std::vector<std::vector<std::string>> ch_witnesses;
    // Agent variables with single-valued domains, annotated because they
    // behave like initial-state commitments.
    std::vector<std::string> single_valued;
    bool dvc = false;
};

HeterogeneityReport check_dvc(const MapProblem &problem);
bool is_homogeneous_team(const MapProblem &problem);

// ---- super agent -----------------------------------------------------------

struct SuperAgentOptions {
    // Chosen initial value per agent VS token, needed when the agents
    // disagree on a shared signature's initial value.
    std::map<std::string, std::string> initial_values;
};

// One agent with the union of domains, variable signatures and action
// signatures of the whole team. Throws SuperagentInitAmbiguous when a
// shared VS has conflicting initial values and no option supplies one.
MapProblem build_super_agent(const MapProblem &problem,
                             const SuperAgentOptions &options = {});

struct SuperAgentCheck {
    Verdict solvable = Verdict::Indeterminate;
    std::optional<Plan> plan;  // plan over the super-agent problem
    MapProblem super_problem;
    std::string note;
};

SuperAgentCheck is_super_agent_solvable(const MapProblem &problem,
                                        const SearchConfig &config,
                                        const SuperAgentOptions &options = {});

}  // namespace coopcheck
