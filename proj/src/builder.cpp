#include "coopcheck/builder.hpp"

#include "coopcheck/tokens.hpp"

namespace coopcheck {

ProblemBuilder::ProblemBuilder(std::string name) {
    problem_.name = std::move(name);
}

ProblemBuilder &ProblemBuilder::agent(const std::string &id) {
    Agent agent;
    agent.id = id;
    problem_.agents.push_back(std::move(agent));
    return *this;
}

ProblemBuilder &ProblemBuilder::variable(const std::string &name,
                                         std::vector<std::string> domain,
                                         std::optional<std::string> agent) {
    Variable var;
    var.name = name;
    var.domain = std::move(domain);
    if (!agent) {
        auto refs = tokens_in(name, problem_.agent_ids());
        if (refs.size() == 1)
            agent = refs.front();
    }
    var.agent_ref = std::move(agent);
    problem_.variables.push_back(std::move(var));
    return *this;
}

PartialState ProblemBuilder::make_state(const Assignments &values,
                                        const std::string &context) const {
    PartialState state(problem_.variables.size());
    for (const auto &[name, value] : values) {
        int v = problem_.variable_index(name);
        if (v < 0)
            throw CoopError(ErrorCode::UnknownVariable,
                            context + " references unknown variable " + name);
        int index = problem_.variables[static_cast<std::size_t>(v)]
                        .value_index(value);
        if (index == kUndefined)
            throw CoopError(ErrorCode::ValueOutOfDomain,
                            context + ": value " + value +
                                " is not in the domain of " + name);
        state.set(static_cast<std::size_t>(v), index);
    }
    return state;
}

ProblemBuilder &ProblemBuilder::action(
    const std::string &name, const std::string &owner, const Assignments &pre,
    const Assignments &post, const Assignments &prv,
    const std::vector<std::string> &checked_pre) {
    Action action;
    action.name = name;
    action.owner = owner;
    action.pre = make_state(pre, name + " pre");
    action.post = make_state(post, name + " post");
    action.prv = make_state(prv, name + " prv");
    for (const auto &var_name : checked_pre) {
        int v = problem_.variable_index(var_name);
        if (v < 0)
            throw CoopError(ErrorCode::UnknownVariable,
                            name + " checked_pre references unknown variable " +
                                var_name);
        action.checked_only_pre.push_back(v);
    }
    problem_.actions.push_back(std::move(action));
    return *this;
}

ProblemBuilder &ProblemBuilder::init(const Assignments &values) {
    init_ = values;
    return *this;
}

ProblemBuilder &ProblemBuilder::goal(const Assignments &values) {
    goal_ = values;
    return *this;
}

MapProblem ProblemBuilder::build(bool single_agent_ok) const {
    MapProblem problem = problem_;
    problem.single_agent_ok = single_agent_ok;
    problem.init = make_state(init_, "init");
    problem.goal = make_state(goal_, "goal");
    // Derive agent action and variable membership.
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        Agent &agent = problem.agents[g];
        agent.actions.clear();
        agent.agent_vars.clear();
        for (std::size_t a = 0; a < problem.actions.size(); ++a)
            if (problem.actions[a].owner == agent.id)
                agent.actions.push_back(static_cast<int>(a));
        for (std::size_t v = 0; v < problem.variables.size(); ++v)
            if (problem.variables[v].agent_ref == agent.id)
                agent.agent_vars.push_back(static_cast<int>(v));
    }
    validate_problem(problem);
    return problem;
}

}  // namespace coopcheck
