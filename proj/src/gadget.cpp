#include <algorithm>
#include <set>

#include "coopcheck/problem_io.hpp"

namespace coopcheck {

namespace {

PartialState widen(const PartialState &s, std::size_t new_size) {
    PartialState out(new_size);
    for (std::size_t v = 0; v < s.size(); ++v)
        out.set(v, s[v]);
    return out;
}

std::string fresh_name(const std::string &base,
                       const std::set<std::string> &taken) {
    if (!taken.count(base))
        return base;
    for (int i = 1;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!taken.count(candidate))
            return candidate;
    }
}

}  // namespace

MapProblem build_rc_probe(const MapProblem &single) {
    if (single.agents.size() != 1)
        throw CoopError(ErrorCode::Structural,
                        "rc probe needs a single-agent input problem");
    validate_problem(single, {.require_multiple_agents = false});

    // Lexicographically first action applicable in I (file order on ties).
    int chosen = -1;
    for (std::size_t a = 0; a < single.actions.size(); ++a) {
        const Action &action = single.actions[a];
        if (!subsumes(join(action.pre, action.prv), single.init))
            continue;
        if (chosen < 0 ||
            action.name < single.actions[static_cast<std::size_t>(chosen)].name)
            chosen = static_cast<int>(a);
    }
    if (chosen < 0)
        throw CoopError(ErrorCode::GadgetUnbuildable,
                        "no action of the original agent is applicable in I");

    std::set<std::string> taken;
    for (const auto &var : single.variables)
        taken.insert(var.name);
    for (const auto &agent : single.agents)
        taken.insert(agent.id);
    const std::string ready = fresh_name("__probe_ready", taken);
    const std::string prober = fresh_name("__probe_agent", taken);

    MapProblem probe;
    probe.name = single.name.empty() ? "rc-probe" : single.name + "-rc-probe";
    probe.variables = single.variables;
    Variable ready_var;
    ready_var.name = ready;
    ready_var.domain = {"false", "true"};
    probe.variables.push_back(ready_var);
    const std::size_t num_vars = probe.variables.size();
    const int ready_index = static_cast<int>(num_vars - 1);

    for (const auto &action : single.actions) {
        Action copy = action;
        copy.pre = widen(action.pre, num_vars);
        copy.post = widen(action.post, num_vars);
        copy.prv = widen(action.prv, num_vars);
        probe.actions.push_back(std::move(copy));
    }
    // The enabling action gains the fresh fluent as an extra postcondition.
    probe.actions[static_cast<std::size_t>(chosen)].post.set(
        static_cast<std::size_t>(ready_index), 1);

    Action finish;
    finish.name = "__probe_finish(" + prober + ")";
    finish.owner = prober;
    finish.pre = PartialState(num_vars);
    finish.pre.set(static_cast<std::size_t>(ready_index), 1);
    finish.post = widen(single.goal, num_vars);
    finish.post.set(static_cast<std::size_t>(ready_index), 1);
    finish.prv = PartialState(num_vars);
    probe.actions.push_back(std::move(finish));

    Agent original = single.agents[0];
    original.actions.clear();
    for (std::size_t a = 0; a + 1 < probe.actions.size(); ++a)
        original.actions.push_back(static_cast<int>(a));
    Agent second;
    second.id = prober;
    second.actions = {static_cast<int>(probe.actions.size() - 1)};
    probe.agents = {original, second};

    probe.init = widen(single.init, num_vars);
    probe.init.set(static_cast<std::size_t>(ready_index), 0);
    probe.goal = widen(single.goal, num_vars);

    validate_problem(probe);
    return probe;
}

}  // namespace coopcheck
