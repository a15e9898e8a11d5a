#pragma once

#include <random>
#include <string>
#include <vector>

#include "coopcheck/model.hpp"

namespace coopcheck::testing {

inline int action_index(const MapProblem &problem, const std::string &name) {
    for (std::size_t a = 0; a < problem.actions.size(); ++a)
        if (problem.actions[a].name == name)
            return static_cast<int>(a);
    throw CoopError(ErrorCode::UnknownAction, "no action named " + name);
}

// Builds a plan from action names; each step's agent is the owner.
inline Plan make_plan(const MapProblem &problem,
                      const std::vector<std::string> &names) {
    Plan plan;
    for (const auto &name : names) {
        int a = action_index(problem, name);
        plan.steps.push_back(
            {a, problem.agent_index(
                    problem.actions[static_cast<std::size_t>(a)].owner)});
    }
    return plan;
}

inline PartialState state_of(
    const MapProblem &problem,
    const std::vector<std::pair<std::string, std::string>> &values) {
    PartialState state(problem.variables.size());
    for (const auto &[name, value] : values) {
        int v = problem.variable_index(name);
        if (v < 0)
            throw CoopError(ErrorCode::UnknownVariable, name);
        int index =
            problem.variables[static_cast<std::size_t>(v)].value_index(value);
        if (index == kUndefined)
            throw CoopError(ErrorCode::ValueOutOfDomain, value);
        state.set(static_cast<std::size_t>(v), index);
    }
    return state;
}

inline std::string value_at(const MapProblem &problem, const PartialState &s,
                            const std::string &variable) {
    int v = problem.variable_index(variable);
    if (v < 0)
        throw CoopError(ErrorCode::UnknownVariable, variable);
    if (!s.defined(static_cast<std::size_t>(v)))
        return "u";
    return problem.variables[static_cast<std::size_t>(v)]
        .domain[static_cast<std::size_t>(s[static_cast<std::size_t>(v)])];
}

// Random partial state over the problem's variables; roughly a third of
// the entries stay undefined.
inline PartialState random_state(const MapProblem &problem,
                                 std::mt19937_64 &rng,
                                 bool fully_defined = false) {
    PartialState state(problem.variables.size());
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        std::size_t size = problem.variables[v].domain.size();
        if (fully_defined || rng() % 3 != 0)
            state.set(v, static_cast<int>(rng() % size));
    }
    return state;
}

inline Plan random_plan(const MapProblem &problem, std::mt19937_64 &rng,
                        std::size_t length) {
    Plan plan;
    for (std::size_t i = 0; i < length; ++i) {
        int a = static_cast<int>(rng() % problem.actions.size());
        plan.steps.push_back(
            {a, problem.agent_index(
                    problem.actions[static_cast<std::size_t>(a)].owner)});
    }
    return plan;
}

}  // namespace coopcheck::testing
