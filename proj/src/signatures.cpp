#include "coopcheck/signatures.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "coopcheck/tokens.hpp"

namespace coopcheck {

namespace {

// Replaces every declared agent reference in `token` with `to`.
std::string ground_agents(const MapProblem &problem, const std::string &token,
                          const std::string &to) {
    const auto ids = problem.agent_ids();
    return substitute_token(token, [&](const std::string &t)
                                       -> std::optional<std::string> {
        if (std::find(ids.begin(), ids.end(), t) != ids.end())
            return to;
        return std::nullopt;
    });
}

std::vector<std::string> signature_domain(const MapProblem &problem,
                                          const std::vector<std::string> &raw) {
    std::vector<std::string> out;
    for (const auto &value : raw) {
        std::string mapped = ground_agents(problem, value, kExAg);
        if (std::find(out.begin(), out.end(), mapped) == out.end())
            out.push_back(mapped);
    }
    return out;
}

}  // namespace

VariableSignature variable_signature(const MapProblem &problem, int var) {
    const Variable &v = problem.variables[static_cast<std::size_t>(var)];
    VariableSignature sig;
    sig.token = ground_agents(problem, v.name, kExAg);
    sig.domain = signature_domain(problem, v.domain);
    return sig;
}

VariableSignature variable_signature(const MapProblem &problem, int var,
                                     const std::string &owner) {
    const Variable &v = problem.variables[static_cast<std::size_t>(var)];
    if (v.agent_ref && *v.agent_ref != owner)
        throw CoopError(ErrorCode::Structural,
                        v.name + " is owned by " + *v.agent_ref + ", not " +
                            owner);
    return variable_signature(problem, var);
}

ActionSignature action_signature(const MapProblem &problem,
                                 const Action &action) {
    ActionSignature sig;
    sig.name = replace_token(action.name, action.owner, kExAg);
    auto collect = [&](const PartialState &s) {
        std::vector<std::pair<std::string, std::string>> entries;
        for (std::size_t v = 0; v < s.size(); ++v) {
            if (!s.defined(v))
                continue;
            const Variable &var = problem.variables[v];
            entries.emplace_back(
                replace_token(var.name, action.owner, kExAg),
                replace_token(var.domain[static_cast<std::size_t>(s[v])],
                              action.owner, kExAg));
        }
        std::sort(entries.begin(), entries.end());
        return entries;
    };
    sig.pre = collect(action.pre);
    sig.post = collect(action.post);
    sig.prv = collect(action.prv);
    return sig;
}

std::string ActionSignature::canonical() const {
    std::ostringstream out;
    out << name;
    auto emit = [&](const char *label,
                    const std::vector<std::pair<std::string, std::string>>
                        &entries) {
        out << "|" << label << ":";
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i > 0)
                out << ",";
            out << entries[i].first << "=" << entries[i].second;
        }
    };
    emit("pre", pre);
    emit("post", post);
    emit("prv", prv);
    return out.str();
}

// ---- heterogeneity ---------------------------------------------------------

std::vector<std::vector<std::string>> check_dh(const MapProblem &problem) {
    std::vector<std::vector<std::string>> witnesses(problem.agents.size());
    if (problem.agents.size() < 2)
        return witnesses;
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        for (int v : problem.agents[g].agent_vars) {
            VariableSignature sig = variable_signature(problem, v);
            std::set<std::string> covered;
            bool shared = false;
            for (std::size_t h = 0; h < problem.agents.size(); ++h) {
                if (h == g)
                    continue;
                for (int w : problem.agents[h].agent_vars) {
                    VariableSignature other = variable_signature(problem, w);
                    if (other.token != sig.token)
                        continue;
                    shared = true;
                    covered.insert(other.domain.begin(), other.domain.end());
                }
            }
            if (!shared)
                continue;  // no same-VS variable elsewhere: VH territory
            bool missing = std::any_of(
                sig.domain.begin(), sig.domain.end(),
                [&](const std::string &value) { return !covered.count(value); });
            if (missing)
                witnesses[g].push_back(
                    problem.variables[static_cast<std::size_t>(v)].name);
        }
    }
    return witnesses;
}

std::vector<std::vector<std::string>> check_vh(const MapProblem &problem) {
    std::vector<std::vector<std::string>> witnesses(problem.agents.size());
    if (problem.agents.size() < 2)
        return witnesses;
    std::vector<std::vector<std::string>> tokens(problem.agents.size());
    for (std::size_t g = 0; g < problem.agents.size(); ++g)
        for (int v : problem.agents[g].agent_vars)
            tokens[g].push_back(variable_signature(problem, v).token);
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        std::set<std::string> others;
        for (std::size_t h = 0; h < problem.agents.size(); ++h)
            if (h != g)
                others.insert(tokens[h].begin(), tokens[h].end());
        for (const auto &token : tokens[g])
            if (!others.count(token))
                witnesses[g].push_back(token);
    }
    return witnesses;
}

std::vector<std::vector<std::string>> check_ch(const MapProblem &problem) {
    std::vector<std::vector<std::string>> witnesses(problem.agents.size());
    if (problem.agents.size() < 2)
        return witnesses;
    std::vector<std::vector<std::string>> signatures(problem.agents.size());
    for (std::size_t g = 0; g < problem.agents.size(); ++g)
        for (int a : problem.agents[g].actions)
            signatures[g].push_back(
                action_signature(problem,
                                 problem.actions[static_cast<std::size_t>(a)])
                    .canonical());
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        std::set<std::string> others;
        for (std::size_t h = 0; h < problem.agents.size(); ++h)
            if (h != g)
                others.insert(signatures[h].begin(), signatures[h].end());
        std::set<std::string> reported;
        for (const auto &sig : signatures[g])
            if (!others.count(sig) && reported.insert(sig).second)
                witnesses[g].push_back(sig);
    }
    return witnesses;
}

HeterogeneityReport check_dvc(const MapProblem &problem) {
    HeterogeneityReport report;
    report.agents = problem.agent_ids();
    report.dh_witnesses = check_dh(problem);
    report.vh_witnesses = check_vh(problem);
    report.ch_witnesses = check_ch(problem);
    for (const auto &agent : problem.agents)
        for (int v : agent.agent_vars)
            if (problem.variables[static_cast<std::size_t>(v)].domain.size() ==
                1)
                report.single_valued.push_back(
                    problem.variables[static_cast<std::size_t>(v)].name);
    for (std::size_t g = 0; g < problem.agents.size(); ++g)
        if (!report.dh_witnesses[g].empty() ||
            !report.vh_witnesses[g].empty() || !report.ch_witnesses[g].empty())
            report.dvc = true;
    return report;
}

bool is_homogeneous_team(const MapProblem &problem) {
    return !check_dvc(problem).dvc;
}

// ---- super agent -----------------------------------------------------------

MapProblem build_super_agent(const MapProblem &problem,
                             const SuperAgentOptions &options) {
    std::set<std::string> taken;
    for (const auto &agent : problem.agents)
        taken.insert(agent.id);
    for (const auto &var : problem.variables)
        taken.insert(var.name);
    std::string id = "super_agent";
    while (taken.count(id))
        id += "_";

    // Grounding onto the super agent: every agent reference and EX-AG
    // become the super agent's id.
    auto ground = [&](const std::string &token) {
        const auto ids = problem.agent_ids();
        return substitute_token(token, [&](const std::string &t)
                                           -> std::optional<std::string> {
            if (t == kExAg ||
                std::find(ids.begin(), ids.end(), t) != ids.end())
                return id;
            return std::nullopt;
        });
    };

    MapProblem super;
    super.name =
        problem.name.empty() ? "super-agent" : problem.name + "-super-agent";
    super.single_agent_ok = true;

    // Merge agent variables by VS token, keeping first-occurrence order;
    // non-agent variables stay in place with grounded domains.
    struct MergedVs {
        std::string token;
        std::vector<std::string> domain;             // signature values
        std::vector<std::pair<int, int>> carriers;   // (agent, variable)
    };
    std::vector<MergedVs> merged;
    std::vector<int> emitted_at(problem.variables.size(), -1);
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        const Variable &var = problem.variables[v];
        VariableSignature sig = variable_signature(problem, static_cast<int>(v));
        if (!var.agent_ref) {
            Variable grounded;
            grounded.name = var.name;
            for (const auto &value : sig.domain)
                grounded.domain.push_back(ground(value));
            emitted_at[v] = static_cast<int>(super.variables.size());
            super.variables.push_back(std::move(grounded));
            continue;
        }
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const MergedVs &m) {
                                   return m.token == sig.token;
                               });
        if (it == merged.end()) {
            MergedVs m;
            m.token = sig.token;
            m.domain = sig.domain;
            m.carriers.emplace_back(problem.agent_index(*var.agent_ref),
                                    static_cast<int>(v));
            Variable grounded;
            grounded.name = ground(sig.token);
            grounded.agent_ref = id;
            emitted_at[v] = static_cast<int>(super.variables.size());
            super.variables.push_back(std::move(grounded));
            merged.push_back(std::move(m));
        } else {
            for (const auto &value : sig.domain)
                if (std::find(it->domain.begin(), it->domain.end(), value) ==
                    it->domain.end())
                    it->domain.push_back(value);
            it->carriers.emplace_back(problem.agent_index(*var.agent_ref),
                                      static_cast<int>(v));
        }
    }
    // Fill merged domains now that unions are complete.
    {
        std::size_t m = 0;
        for (std::size_t v = 0; v < problem.variables.size(); ++v) {
            if (!problem.variables[v].agent_ref || emitted_at[v] < 0)
                continue;
            Variable &grounded =
                super.variables[static_cast<std::size_t>(emitted_at[v])];
            for (const auto &value : merged[m].domain)
                grounded.domain.push_back(ground(value));
            ++m;
        }
    }

    auto super_var_index = [&](const std::string &sig_token) {
        int index = super.variable_index(ground(sig_token));
        if (index < 0)
            throw CoopError(ErrorCode::Structural,
                            "no super-agent variable for " + sig_token);
        return index;
    };

    // One action per distinct action signature, grounded onto the super
    // agent, in first-occurrence order.
    std::set<std::string> seen_signatures;
    for (const auto &action : problem.actions) {
        ActionSignature sig = action_signature(problem, action);
        if (!seen_signatures.insert(sig.canonical()).second)
            continue;
        Action grounded;
        grounded.name = ground(sig.name);
        grounded.owner = id;
        grounded.pre = PartialState(super.variables.size());
        grounded.post = PartialState(super.variables.size());
        grounded.prv = PartialState(super.variables.size());
        auto fill = [&](const std::vector<std::pair<std::string, std::string>>
                            &entries,
                        PartialState &state) {
            for (const auto &[token, value] : entries) {
                int v = super_var_index(token);
                int value_index =
                    super.variables[static_cast<std::size_t>(v)].value_index(
                        ground(value));
                if (value_index == kUndefined)
                    throw CoopError(ErrorCode::Structural,
                                    "grounded value missing from domain of " +
                                        token);
                state.set(static_cast<std::size_t>(v), value_index);
            }
        };
        fill(sig.pre, grounded.pre);
        fill(sig.post, grounded.post);
        fill(sig.prv, grounded.prv);
        for (int v : action.checked_only_pre) {
            VariableSignature vsig = variable_signature(problem, v);
            grounded.checked_only_pre.push_back(super_var_index(vsig.token));
        }
        super.actions.push_back(std::move(grounded));
    }

    Agent star;
    star.id = id;
    for (std::size_t a = 0; a < super.actions.size(); ++a)
        star.actions.push_back(static_cast<int>(a));
    for (std::size_t v = 0; v < super.variables.size(); ++v)
        if (super.variables[v].agent_ref)
            star.agent_vars.push_back(static_cast<int>(v));
    super.agents = {star};

    // Initial state: non-agent values carried over; per merged VS either
    // the agents agree (up to signature) or a chosen value is required.
    super.init = PartialState(super.variables.size());
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        if (problem.variables[v].agent_ref)
            continue;
        const std::string raw =
            problem.variables[v]
                .domain[static_cast<std::size_t>(problem.init[v])];
        int target = emitted_at[v];
        int value_index = super.variables[static_cast<std::size_t>(target)]
                              .value_index(ground(raw));
        super.init.set(static_cast<std::size_t>(target), value_index);
    }
    for (const auto &m : merged) {
        std::set<std::string> initial;
        for (const auto &[agent, var] : m.carriers) {
            (void)agent;
            const Variable &raw_var =
                problem.variables[static_cast<std::size_t>(var)];
            const std::string raw =
                raw_var.domain[static_cast<std::size_t>(
                    problem.init[static_cast<std::size_t>(var)])];
            initial.insert(ground_agents(problem, raw, kExAg));
        }
        std::string value;
        if (initial.size() == 1) {
            value = *initial.begin();
        } else {
            auto chosen = options.initial_values.find(m.token);
            if (chosen == options.initial_values.end()) {
                std::string candidates;
                for (const auto &c : initial)
                    candidates += (candidates.empty() ? "" : ", ") + c;
                throw CoopError(ErrorCode::SuperagentInitAmbiguous,
                                m.token + " starts as {" + candidates +
                                    "}; supply an initial value");
            }
            value = ground_agents(problem, chosen->second, kExAg);
        }
        int v = super_var_index(m.token);
        int value_index =
            super.variables[static_cast<std::size_t>(v)].value_index(
                ground(value));
        if (value_index == kUndefined)
            throw CoopError(ErrorCode::ValueOutOfDomain,
                            "initial value " + value + " is not in the " +
                                "merged domain of " + m.token);
        super.init.set(static_cast<std::size_t>(v), value_index);
    }

    super.goal = PartialState(super.variables.size());
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        if (!problem.goal.defined(v))
            continue;
        const std::string raw =
            problem.variables[v]
                .domain[static_cast<std::size_t>(problem.goal[v])];
        int target = emitted_at[v];
        int value_index = super.variables[static_cast<std::size_t>(target)]
                              .value_index(ground(raw));
        super.goal.set(static_cast<std::size_t>(target), value_index);
    }

    validate_problem(super, {.require_multiple_agents = false});
    return super;
}

SuperAgentCheck is_super_agent_solvable(const MapProblem &problem,
                                        const SearchConfig &config,
                                        const SuperAgentOptions &options) {
    SuperAgentCheck check;
    check.super_problem = build_super_agent(problem, options);
    SolveResult result = solve(check.super_problem, {0}, config);
    switch (result.status) {
    case SolveStatus::Solved:
        check.solvable = Verdict::Yes;
        check.plan = result.plan;
        break;
    case SolveStatus::Unsolvable:
        check.solvable = Verdict::No;
        break;
    case SolveStatus::Indeterminate:
        check.solvable = Verdict::Indeterminate;
        check.note = result.note;
        break;
    }
    return check;
}

}  // namespace coopcheck
