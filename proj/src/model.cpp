#include "coopcheck/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "coopcheck/tokens.hpp"

namespace coopcheck {

const char *verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

Verdict verdict_from_name(const std::string &name) {
    if (name == "yes")
        return Verdict::Yes;
    if (name == "no")
        return Verdict::No;
    if (name == "indeterminate")
        return Verdict::Indeterminate;
    throw CoopError(ErrorCode::Structural, "unknown verdict '" + name + "'");
}

int Variable::value_index(const std::string &value) const {
    auto it = std::find(domain.begin(), domain.end(), value);
    if (it == domain.end())
        return kUndefined;
    return static_cast<int>(it - domain.begin());
}

bool PartialState::fully_defined() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](int v) { return v != kUndefined; });
}

std::size_t PartialState::defined_count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(),
                      [](int v) { return v != kUndefined; }));
}

int MapProblem::variable_index(const std::string &name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int MapProblem::agent_index(const std::string &id) const {
    for (std::size_t i = 0; i < agents.size(); ++i)
        if (agents[i].id == id)
            return static_cast<int>(i);
    return -1;
}

std::vector<std::string> MapProblem::agent_ids() const {
    std::vector<std::string> ids;
    ids.reserve(agents.size());
    for (const auto &agent : agents)
        ids.push_back(agent.id);
    return ids;
}

// ---- state algebra -------------------------------------------------------

namespace {
void require_same_size(const PartialState &s1, const PartialState &s2,
                       const char *op) {
    if (s1.size() != s2.size())
        throw CoopError(ErrorCode::Structural,
                        std::string(op) + " over mismatched variable sets (" +
                            std::to_string(s1.size()) + " vs " +
                            std::to_string(s2.size()) + ")");
}
}  // namespace

PartialState update(const PartialState &s1, const PartialState &s2) {
    require_same_size(s1, s2, "update");
    PartialState result(s1.size());
    for (std::size_t v = 0; v < s1.size(); ++v)
        result.set(v, s2.defined(v) ? s2[v] : s1[v]);
    return result;
}

PartialState join(const PartialState &s1, const PartialState &s2) {
    require_same_size(s1, s2, "join");
    PartialState result(s1.size());
    for (std::size_t v = 0; v < s1.size(); ++v) {
        if (s1.defined(v) && s2.defined(v))
            throw CoopError(ErrorCode::JoinConflict,
                            "both operands defined at variable index " +
                                std::to_string(v));
        result.set(v, s1.defined(v) ? s1[v] : s2[v]);
    }
    return result;
}

bool subsumes(const PartialState &s1, const PartialState &s2) {
    require_same_size(s1, s2, "subsumes");
    for (std::size_t v = 0; v < s1.size(); ++v)
        if (s1.defined(v) && s1[v] != s2[v])
            return false;
    return true;
}

// ---- execution -----------------------------------------------------------

ExecutionResult execute(const MapProblem &problem, const PartialState &s,
                        const Plan &plan) {
    if (s.size() != problem.variables.size())
        throw CoopError(ErrorCode::Structural,
                        "state size does not match problem variables");
    if (!s.fully_defined())
        throw CoopError(ErrorCode::Structural,
                        "execute requires a fully defined start state");
    ExecutionResult result;
    result.final_state = s;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const PlanStep &step = plan.steps[i];
        if (step.action < 0 ||
            step.action >= static_cast<int>(problem.actions.size()))
            throw CoopError(ErrorCode::UnknownAction,
                            "plan step " + std::to_string(i) +
                                " references an unknown action");
        if (step.agent < 0 ||
            step.agent >= static_cast<int>(problem.agents.size()))
            throw CoopError(ErrorCode::UnknownAgent,
                            "plan step " + std::to_string(i) +
                                " references an unknown agent");
        const Action &action = problem.actions[step.action];
        if (action.owner != problem.agents[step.agent].id)
            throw CoopError(ErrorCode::Structural,
                            "plan step " + std::to_string(i) + " assigns " +
                                action.name + " to non-owner agent " +
                                problem.agents[step.agent].id);
        PartialState required = join(action.pre, action.prv);
        if (subsumes(required, result.final_state))
            result.final_state = update(result.final_state, action.post);
        else
            result.skipped.push_back(i);
    }
    return result;
}

ValidationResult validate_plan(const MapProblem &problem, const Plan &plan) {
    ValidationResult result;
    ExecutionResult exec = execute(problem, problem.init, plan);
    result.final_state = exec.final_state;
    if (!exec.skipped.empty()) {
        std::size_t step_index = exec.skipped.front();
        // Re-run the prefix to recover the state the failing step saw.
        Plan prefix;
        prefix.steps.assign(plan.steps.begin(),
                            plan.steps.begin() +
                                static_cast<std::ptrdiff_t>(step_index));
        PartialState before =
            execute(problem, problem.init, prefix).final_state;
        const Action &action = problem.actions[plan.steps[step_index].action];
        PartialState required = join(action.pre, action.prv);
        std::string violated;
        for (std::size_t v = 0; v < required.size(); ++v) {
            if (required.defined(v) && required[v] != before[v]) {
                violated = problem.variables[v].name + " = " +
                           problem.variables[v].domain[static_cast<std::size_t>(
                               required[v])] +
                           " required by " + action.name;
                break;
            }
        }
        result.valid = false;
        result.failing_step = step_index;
        result.violation = violated;
        return result;
    }
    if (!subsumes(problem.goal, exec.final_state)) {
        result.valid = false;
        for (std::size_t v = 0; v < problem.goal.size(); ++v) {
            if (problem.goal.defined(v) &&
                problem.goal[v] != exec.final_state[v]) {
                result.violation =
                    "goal not satisfied: " + problem.variables[v].name;
                break;
            }
        }
        return result;
    }
    result.valid = true;
    return result;
}

// ---- structural validation -----------------------------------------------

namespace {

void validate_condition_state(const MapProblem &problem, const PartialState &s,
                              const std::string &context) {
    if (s.size() != problem.variables.size())
        throw CoopError(ErrorCode::Structural,
                        context + ": state size mismatch");
    for (std::size_t v = 0; v < s.size(); ++v) {
        if (!s.defined(v))
            continue;
        if (s[v] < 0 ||
            s[v] >= static_cast<int>(problem.variables[v].domain.size()))
            throw CoopError(ErrorCode::ValueOutOfDomain,
                            context + ": value index out of range for " +
                                problem.variables[v].name);
    }
}

void validate_action(const MapProblem &problem, const Action &action) {
    validate_condition_state(problem, action.pre, action.name + " pre");
    validate_condition_state(problem, action.post, action.name + " post");
    validate_condition_state(problem, action.prv, action.name + " prv");

    if (action.post.defined_count() == 0)
        throw CoopError(ErrorCode::PostEmpty,
                        action.name + " updates no variable");
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        if (action.prv.defined(v) && action.post.defined(v))
            throw CoopError(ErrorCode::PrvPostOverlap,
                            action.name + " both prevails on and updates " +
                                problem.variables[v].name);
        if (action.pre.defined(v) && action.prv.defined(v))
            throw CoopError(ErrorCode::PrePrvOverlap,
                            action.name + " has pre and prv on " +
                                problem.variables[v].name);
        if (action.pre.defined(v) && !action.post.defined(v)) {
            bool checked = std::find(action.checked_only_pre.begin(),
                                     action.checked_only_pre.end(),
                                     static_cast<int>(v)) !=
                           action.checked_only_pre.end();
            if (!checked)
                throw CoopError(ErrorCode::PreWithoutPost,
                                action.name + " has unpaired pre on " +
                                    problem.variables[v].name +
                                    " (not flagged checked-only)");
        }
        // Agents interact through non-agent variables only.
        const auto &ref = problem.variables[v].agent_ref;
        bool touched = action.pre.defined(v) || action.post.defined(v) ||
                       action.prv.defined(v);
        if (touched && ref && *ref != action.owner)
            throw CoopError(ErrorCode::CrossAgentCondition,
                            action.name + " of " + action.owner +
                                " touches agent variable " +
                                problem.variables[v].name + " of " + *ref);
    }
}

}  // namespace

void validate_problem(const MapProblem &problem,
                      const ValidationOptions &options) {
    const auto agent_names = problem.agent_ids();

    if (problem.agents.empty())
        throw CoopError(ErrorCode::NeedsMultipleAgents, "no agents declared");
    if (options.require_multiple_agents && !problem.single_agent_ok &&
        problem.agents.size() < 2)
        throw CoopError(ErrorCode::NeedsMultipleAgents,
                        "a MAP problem needs more than one agent");

    std::set<std::string> seen_agents;
    for (const auto &agent : problem.agents) {
        if (agent.id == kExAg)
            throw CoopError(ErrorCode::ReservedToken,
                            "agent id EX-AG is reserved");
        if (!seen_agents.insert(agent.id).second)
            throw CoopError(ErrorCode::DuplicateName,
                            "duplicate agent " + agent.id);
    }

    std::set<std::string> seen_vars;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        const Variable &var = problem.variables[v];
        if (var.name == kExAg)
            throw CoopError(ErrorCode::ReservedToken,
                            "variable name EX-AG is reserved");
        if (!seen_vars.insert(var.name).second)
            throw CoopError(ErrorCode::DuplicateName,
                            "duplicate variable " + var.name);
        if (var.domain.empty())
            throw CoopError(ErrorCode::EmptyDomain,
                            var.name + " has an empty domain");
        std::set<std::string> seen_values;
        for (const auto &value : var.domain) {
            if (value == kExAg)
                throw CoopError(ErrorCode::ReservedToken,
                                "domain value EX-AG is reserved in " +
                                    var.name);
            if (value == "u")
                throw CoopError(ErrorCode::ReservedToken,
                                "'u' denotes the undefined value and cannot "
                                "be a domain constant of " +
                                    var.name);
            if (!seen_values.insert(value).second)
                throw CoopError(ErrorCode::DuplicateValue,
                                var.name + " repeats domain value " + value);
        }
        // Agent references in the name must be unique and consistent with
        // the declared owner.
        auto refs = tokens_in(var.name, agent_names);
        if (refs.size() > 1)
            throw CoopError(ErrorCode::AgentVarMultiRef,
                            var.name + " references " +
                                std::to_string(refs.size()) + " agents");
        if (var.agent_ref) {
            if (problem.agent_index(*var.agent_ref) < 0)
                throw CoopError(ErrorCode::UnknownAgent,
                                var.name + " is owned by undeclared agent " +
                                    *var.agent_ref);
            if (!refs.empty() && refs.front() != *var.agent_ref)
                throw CoopError(ErrorCode::AgentRefMismatch,
                                var.name + " names " + refs.front() +
                                    " but is declared for " + *var.agent_ref);
        } else if (!refs.empty()) {
            throw CoopError(ErrorCode::AgentRefMismatch,
                            var.name + " references agent " + refs.front() +
                                " but carries no agent declaration");
        }
    }

    // Agent action lists must cover exactly the declared actions.
    std::vector<int> owner_of_action(problem.actions.size(), -1);
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        for (int a : problem.agents[g].actions) {
            if (a < 0 || a >= static_cast<int>(problem.actions.size()))
                throw CoopError(ErrorCode::UnknownAction,
                                "agent " + problem.agents[g].id +
                                    " lists an unknown action index");
            if (problem.actions[static_cast<std::size_t>(a)].owner !=
                problem.agents[g].id)
                throw CoopError(ErrorCode::Structural,
                                "agent " + problem.agents[g].id +
                                    " lists an action it does not own");
            owner_of_action[static_cast<std::size_t>(a)] =
                static_cast<int>(g);
        }
        for (int v : problem.agents[g].agent_vars) {
            if (v < 0 || v >= static_cast<int>(problem.variables.size()) ||
                problem.variables[static_cast<std::size_t>(v)].agent_ref !=
                    problem.agents[g].id)
                throw CoopError(ErrorCode::Structural,
                                "agent " + problem.agents[g].id +
                                    " lists a variable it does not own");
        }
    }
    for (std::size_t a = 0; a < problem.actions.size(); ++a) {
        if (problem.agent_index(problem.actions[a].owner) < 0)
            throw CoopError(ErrorCode::UnknownAgent,
                            problem.actions[a].name +
                                " owned by undeclared agent " +
                                problem.actions[a].owner);
        if (owner_of_action[a] < 0)
            throw CoopError(ErrorCode::Structural,
                            problem.actions[a].name +
                                " is not listed by its owner agent");
        validate_action(problem, problem.actions[a]);
    }

    if (problem.init.size() != problem.variables.size())
        throw CoopError(ErrorCode::Structural, "init state size mismatch");
    if (!problem.init.fully_defined())
        throw CoopError(ErrorCode::InitNotFull,
                        "init must assign every variable");
    validate_condition_state(problem, problem.init, "init");
    validate_condition_state(problem, problem.goal, "goal");
    for (std::size_t v = 0; v < problem.goal.size(); ++v)
        if (problem.goal.defined(v) && problem.is_agent_var(static_cast<int>(v)))
            throw CoopError(ErrorCode::GoalOnAgentVar,
                            "goal constrains agent variable " +
                                problem.variables[v].name);
}

std::string format_state(const MapProblem &problem, const PartialState &s) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t v = 0; v < s.size(); ++v) {
        if (!s.defined(v))
            continue;
        if (!first)
            out << ", ";
        first = false;
        out << problem.variables[v].name << ":"
            << problem.variables[v].domain[static_cast<std::size_t>(s[v])];
    }
    return out.str();
}

std::string format_plan(const MapProblem &problem, const Plan &plan) {
    std::ostringstream out;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        if (i > 0)
            out << "; ";
        out << problem.actions[static_cast<std::size_t>(plan.steps[i].action)]
                   .name;
    }
    return out.str();
}

}  // namespace coopcheck
