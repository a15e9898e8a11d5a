#include "coopcheck/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "coopcheck/signatures.hpp"
#include "coopcheck/tokens.hpp"

namespace coopcheck {

namespace {

struct CompiledAction {
    int action;
    int agent;
    std::vector<std::pair<int, int>> conditions;  // (active var, value)
    std::vector<std::pair<int, int>> posts;
};

Verdict to_verdict(SolveStatus status) {
    switch (status) {
    case SolveStatus::Solved: return Verdict::Yes;
    case SolveStatus::Unsolvable: return Verdict::No;
    case SolveStatus::Indeterminate: return Verdict::Indeterminate;
    }
    return Verdict::Indeterminate;
}

}  // namespace

SolveResult solve(const MapProblem &problem, const std::vector<int> &subset,
                  const SearchConfig &config) {
    if (subset.empty())
        throw CoopError(ErrorCode::Structural, "empty agent subset");
    if (config.max_states < 1 ||
        (config.max_plan_len && *config.max_plan_len < 1))
        throw CoopError(ErrorCode::Structural,
                        "search caps must be strictly positive");
    std::vector<char> in_subset(problem.agents.size(), 0);
    for (int g : subset) {
        if (g < 0 || g >= static_cast<int>(problem.agents.size()))
            throw CoopError(ErrorCode::UnknownAgent,
                            "agent subset index out of range");
        in_subset[static_cast<std::size_t>(g)] = 1;
    }

    // Variables of non-selected agents stay frozen at their initial values.
    std::vector<int> active_of_var(problem.variables.size(), -1);
    std::vector<int> var_of_active;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        const auto &ref = problem.variables[v].agent_ref;
        bool frozen = false;
        if (ref) {
            int g = problem.agent_index(*ref);
            frozen = g < 0 || !in_subset[static_cast<std::size_t>(g)];
        }
        if (!frozen) {
            active_of_var[v] = static_cast<int>(var_of_active.size());
            var_of_active.push_back(static_cast<int>(v));
        }
    }

    // A goal on a frozen variable must already hold in I.
    for (std::size_t v = 0; v < problem.goal.size(); ++v)
        if (problem.goal.defined(v) && active_of_var[v] < 0 &&
            problem.goal[v] != problem.init[v]) {
            SolveResult result;
            result.status = SolveStatus::Unsolvable;
            result.states_seen = 1;
            return result;
        }

    std::vector<CompiledAction> compiled;
    for (std::size_t a = 0; a < problem.actions.size(); ++a) {
        const Action &action = problem.actions[a];
        int g = problem.agent_index(action.owner);
        if (g < 0 || !in_subset[static_cast<std::size_t>(g)])
            continue;
        CompiledAction entry;
        entry.action = static_cast<int>(a);
        entry.agent = g;
        bool applicable = true;
        for (std::size_t v = 0; v < problem.variables.size(); ++v) {
            int required = kUndefined;
            if (action.pre.defined(v))
                required = action.pre[v];
            if (action.prv.defined(v))
                required = action.prv[v];
            if (required != kUndefined) {
                if (active_of_var[v] >= 0)
                    entry.conditions.emplace_back(active_of_var[v], required);
                else if (problem.init[v] != required)
                    applicable = false;  // frozen mismatch, never fires
            }
            if (action.post.defined(v)) {
                if (active_of_var[v] < 0)
                    throw CoopError(ErrorCode::CrossAgentCondition,
                                    action.name +
                                        " updates a frozen agent variable");
                entry.posts.emplace_back(active_of_var[v], action.post[v]);
            }
        }
        if (applicable)
            compiled.push_back(std::move(entry));
    }

    std::string initial(var_of_active.size(), '\0');
    for (std::size_t i = 0; i < var_of_active.size(); ++i)
        initial[i] = static_cast<char>(
            problem.init[static_cast<std::size_t>(var_of_active[i])]);

    std::vector<std::pair<int, int>> goal_pairs;
    for (std::size_t v = 0; v < problem.goal.size(); ++v)
        if (problem.goal.defined(v) && active_of_var[v] >= 0)
            goal_pairs.emplace_back(active_of_var[v], problem.goal[v]);
    auto satisfies_goal = [&](const std::string &state) {
        for (const auto &[i, value] : goal_pairs)
            if (state[static_cast<std::size_t>(i)] !=
                static_cast<char>(value))
                return false;
        return true;
    };

    SolveResult result;
    std::unordered_map<std::string, int> visited;
    std::vector<std::string> states;
    std::vector<std::pair<int, int>> parent;  // (state id, compiled index)
    std::vector<int> depth;

    auto reconstruct = [&](int id) {
        Plan plan;
        while (id > 0) {
            const auto &[prev, c] = parent[static_cast<std::size_t>(id)];
            plan.steps.push_back(
                {compiled[static_cast<std::size_t>(c)].action,
                 compiled[static_cast<std::size_t>(c)].agent});
            id = prev;
        }
        std::reverse(plan.steps.begin(), plan.steps.end());
        return plan;
    };

    visited.emplace(initial, 0);
    states.push_back(initial);
    parent.emplace_back(-1, -1);
    depth.push_back(0);
    if (satisfies_goal(initial)) {
        result.status = SolveStatus::Solved;
        result.states_seen = 1;
        return result;
    }

    std::deque<int> queue = {0};
    bool depth_capped = false;
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        if (config.max_plan_len && depth[static_cast<std::size_t>(id)] >=
                                       *config.max_plan_len) {
            depth_capped = true;
            continue;
        }
        const std::string current = states[static_cast<std::size_t>(id)];
        for (std::size_t c = 0; c < compiled.size(); ++c) {
            const CompiledAction &action = compiled[c];
            bool ok = true;
            for (const auto &[i, value] : action.conditions)
                if (current[static_cast<std::size_t>(i)] !=
                    static_cast<char>(value)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            std::string next = current;
            for (const auto &[i, value] : action.posts)
                next[static_cast<std::size_t>(i)] = static_cast<char>(value);
            if (visited.count(next))
                continue;
            if (static_cast<long>(visited.size()) >= config.max_states) {
                result.status = SolveStatus::Indeterminate;
                result.states_seen = static_cast<long>(visited.size());
                result.note = "max_states cap (" +
                              std::to_string(config.max_states) + ") reached";
                return result;
            }
            int next_id = static_cast<int>(states.size());
            visited.emplace(next, next_id);
            states.push_back(next);
            parent.emplace_back(id, static_cast<int>(c));
            depth.push_back(depth[static_cast<std::size_t>(id)] + 1);
            if (satisfies_goal(next)) {
                result.status = SolveStatus::Solved;
                result.plan = reconstruct(next_id);
                result.states_seen = static_cast<long>(visited.size());
                return result;
            }
            queue.push_back(next_id);
        }
    }

    result.states_seen = static_cast<long>(visited.size());
    if (depth_capped) {
        result.status = SolveStatus::Indeterminate;
        result.note = "max_plan_len cap (" +
                      std::to_string(*config.max_plan_len) + ") reached";
    } else {
        result.status = SolveStatus::Unsolvable;
    }
    return result;
}

RcVerdict is_rc(const MapProblem &problem, const SearchConfig &config) {
    RcVerdict verdict;
    std::vector<int> all;
    for (std::size_t g = 0; g < problem.agents.size(); ++g)
        all.push_back(static_cast<int>(g));
    SolveResult team = solve(problem, all, config);
    verdict.solvable = to_verdict(team.status);
    if (team.status == SolveStatus::Solved)
        verdict.witness_plan = team.plan;
    else if (team.status == SolveStatus::Indeterminate)
        verdict.caps_hit.push_back("team solve: " + team.note);

    bool any_single = false;
    bool any_single_indeterminate = false;
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        SolveResult single = solve(problem, {static_cast<int>(g)}, config);
        verdict.per_agent_solvable.emplace_back(problem.agents[g].id,
                                                to_verdict(single.status));
        if (single.status == SolveStatus::Solved) {
            any_single = true;
            // A singleton plan is a team plan as well.
            if (verdict.solvable != Verdict::Yes) {
                verdict.solvable = Verdict::Yes;
                verdict.witness_plan = single.plan;
            }
        } else if (single.status == SolveStatus::Indeterminate) {
            any_single_indeterminate = true;
            verdict.caps_hit.push_back("solve({" + problem.agents[g].id +
                                       "}): " + single.note);
        }
    }

    if (any_single)
        verdict.rc = Verdict::No;
    else if (verdict.solvable == Verdict::No)
        verdict.rc = Verdict::No;
    else if (verdict.solvable == Verdict::Indeterminate ||
             any_single_indeterminate)
        verdict.rc = Verdict::Indeterminate;
    else
        verdict.rc = Verdict::Yes;
    return verdict;
}

std::vector<std::vector<int>> agent_equivalence_classes(
    const MapProblem &problem) {
    std::vector<std::string> keys(problem.agents.size());
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        const Agent &agent = problem.agents[g];
        std::set<std::string> as_set;
        for (int a : agent.actions)
            as_set.insert(
                action_signature(problem,
                                 problem.actions[static_cast<std::size_t>(a)])
                    .canonical());
        std::set<std::string> vs_set;
        std::set<std::string> init_set;
        for (int v : agent.agent_vars) {
            VariableSignature sig = variable_signature(problem, v);
            std::string entry = sig.token + "{";
            for (std::size_t i = 0; i < sig.domain.size(); ++i)
                entry += (i ? "," : "") + sig.domain[i];
            vs_set.insert(entry + "}");
            const Variable &var =
                problem.variables[static_cast<std::size_t>(v)];
            const std::string raw =
                var.domain[static_cast<std::size_t>(
                    problem.init[static_cast<std::size_t>(v)])];
            // Compare initial values up to agent reference.
            std::string mapped = raw;
            for (const auto &other : problem.agents)
                mapped = replace_token(mapped, other.id, kExAg);
            init_set.insert(sig.token + "=" + mapped);
        }
        std::string key;
        for (const auto &s : as_set)
            key += s + ";";
        key += "#";
        for (const auto &s : vs_set)
            key += s + ";";
        key += "#";
        for (const auto &s : init_set)
            key += s + ";";
        keys[g] = std::move(key);
    }

    std::vector<std::vector<int>> classes;
    for (std::size_t g = 0; g < problem.agents.size(); ++g) {
        bool placed = false;
        for (auto &cls : classes)
            if (keys[static_cast<std::size_t>(cls.front())] == keys[g]) {
                cls.push_back(static_cast<int>(g));
                placed = true;
                break;
            }
        if (!placed)
            classes.push_back({static_cast<int>(g)});
    }
    return classes;
}

namespace {

// One representative subset per multiset of equivalence classes.
void enumerate_class_counts(const std::vector<std::vector<int>> &classes,
                            std::size_t index, int remaining,
                            std::vector<int> &counts,
                            std::vector<std::vector<int>> &subsets) {
    if (index == classes.size()) {
        if (remaining != 0)
            return;
        std::vector<int> subset;
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (int i = 0; i < counts[c]; ++i)
                subset.push_back(classes[c][static_cast<std::size_t>(i)]);
        std::sort(subset.begin(), subset.end());
        subsets.push_back(std::move(subset));
        return;
    }
    int limit = std::min<int>(remaining,
                              static_cast<int>(classes[index].size()));
    for (int take = 0; take <= limit; ++take) {
        counts[index] = take;
        enumerate_class_counts(classes, index + 1, remaining - take, counts,
                               subsets);
    }
    counts[index] = 0;
}

}  // namespace

MinimalKResult minimal_k(const MapProblem &problem,
                         const SearchConfig &config) {
    std::vector<int> all;
    for (std::size_t g = 0; g < problem.agents.size(); ++g)
        all.push_back(static_cast<int>(g));
    SolveResult team = solve(problem, all, config);
    if (team.status == SolveStatus::Unsolvable)
        throw CoopError(ErrorCode::UnsolvableProblem,
                        "minimal_k needs a solvable problem");

    MinimalKResult result;
    if (team.status == SolveStatus::Indeterminate) {
        result.status = Verdict::Indeterminate;
        return result;
    }

    const auto classes = agent_equivalence_classes(problem);
    bool capped_below = false;
    for (int k = 1; k <= static_cast<int>(problem.agents.size()); ++k) {
        std::vector<std::vector<int>> subsets;
        std::vector<int> counts(classes.size(), 0);
        enumerate_class_counts(classes, 0, k, counts, subsets);
        bool capped_here = false;
        for (const auto &subset : subsets) {
            SolveResult r = solve(problem, subset, config);
            if (r.status == SolveStatus::Solved) {
                result.status =
                    capped_below ? Verdict::Indeterminate : Verdict::Yes;
                result.k = k;
                result.subset = subset;
                result.plan = r.plan;
                return result;
            }
            if (r.status == SolveStatus::Indeterminate)
                capped_here = true;
        }
        capped_below = capped_below || capped_here;
    }
    // The full team solved above, so this point is unreachable unless a cap
    // interfered with the size-|Phi| subset.
    result.status = Verdict::Indeterminate;
    return result;
}

MapProblem clone_team_problem(const MapProblem &problem, int n) {
    if (n < 1)
        throw CoopError(ErrorCode::Structural, "clone count must be >= 1");
    if (!is_homogeneous_team(problem))
        throw CoopError(ErrorCode::NotHomogeneous,
                        "bound verification needs a homogeneous team");
    const Agent &rep = problem.agents[0];
    const auto ids = problem.agent_ids();

    std::set<std::string> taken;
    for (const auto &agent : problem.agents)
        taken.insert(agent.id);
    for (const auto &var : problem.variables)
        taken.insert(var.name);
    std::string stem = "clone";
    bool clash = true;
    while (clash) {
        clash = false;
        for (int i = 1; i <= n; ++i)
            if (taken.count(stem + std::to_string(i)))
                clash = true;
        if (clash)
            stem += "_";
    }
    std::vector<std::string> clones;
    for (int i = 1; i <= n; ++i)
        clones.push_back(stem + std::to_string(i));

    // Signature values with EX-AG expand to the whole clone set.
    auto expand_domain = [&](const std::vector<std::string> &sig_domain) {
        std::vector<std::string> out;
        for (const auto &value : sig_domain) {
            if (value == kExAg) {
                for (const auto &clone : clones)
                    if (std::find(out.begin(), out.end(), clone) == out.end())
                        out.push_back(clone);
            } else if (std::find(out.begin(), out.end(), value) == out.end()) {
                out.push_back(value);
            }
        }
        return out;
    };
    // Specific agent references in world values map onto clones cyclically.
    auto map_world_value = [&](const std::string &raw) {
        return substitute_token(raw, [&](const std::string &t)
                                         -> std::optional<std::string> {
            auto it = std::find(ids.begin(), ids.end(), t);
            if (it == ids.end())
                return std::nullopt;
            std::size_t index = static_cast<std::size_t>(it - ids.begin());
            return clones[index % static_cast<std::size_t>(n)];
        });
    };

    MapProblem clone;
    clone.name = problem.name.empty()
                     ? "clone-team"
                     : problem.name + "-x" + std::to_string(n);
    clone.single_agent_ok = n == 1;

    struct VarOrigin {
        int source;       // original variable index
        int clone = -1;   // clone ordinal for agent variables
    };
    std::vector<VarOrigin> origins;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        const Variable &var = problem.variables[v];
        if (!var.agent_ref) {
            VariableSignature sig =
                variable_signature(problem, static_cast<int>(v));
            Variable out;
            out.name = var.name;
            out.domain = expand_domain(sig.domain);
            clone.variables.push_back(std::move(out));
            origins.push_back({static_cast<int>(v), -1});
            continue;
        }
        if (*var.agent_ref != rep.id)
            continue;  // other agents are replaced by the clones
        VariableSignature sig =
            variable_signature(problem, static_cast<int>(v));
        for (int i = 0; i < n; ++i) {
            Variable out;
            out.name = replace_token(sig.token, kExAg,
                                     clones[static_cast<std::size_t>(i)]);
            out.agent_ref = clones[static_cast<std::size_t>(i)];
            out.domain = expand_domain(sig.domain);
            clone.variables.push_back(std::move(out));
            origins.push_back({static_cast<int>(v), i});
        }
    }

    for (int i = 0; i < n; ++i) {
        Agent agent;
        agent.id = clones[static_cast<std::size_t>(i)];
        clone.agents.push_back(std::move(agent));
    }

    for (int a : rep.actions) {
        const Action &action = problem.actions[static_cast<std::size_t>(a)];
        ActionSignature sig = action_signature(problem, action);
        for (int i = 0; i < n; ++i) {
            const std::string &me = clones[static_cast<std::size_t>(i)];
            Action out;
            out.name = replace_token(sig.name, kExAg, me);
            out.owner = me;
            out.pre = PartialState(clone.variables.size());
            out.post = PartialState(clone.variables.size());
            out.prv = PartialState(clone.variables.size());
            auto fill = [&](const std::vector<std::pair<std::string,
                                                        std::string>> &entries,
                            PartialState &state) {
                for (const auto &[token, value] : entries) {
                    int v = clone.variable_index(
                        replace_token(token, kExAg, me));
                    if (v < 0)
                        throw CoopError(ErrorCode::Structural,
                                        "clone variable missing for " + token);
                    int value_index =
                        clone.variables[static_cast<std::size_t>(v)]
                            .value_index(replace_token(value, kExAg, me));
                    if (value_index == kUndefined)
                        throw CoopError(ErrorCode::ValueOutOfDomain,
                                        "clone value missing for " + value);
                    state.set(static_cast<std::size_t>(v), value_index);
                }
            };
            fill(sig.pre, out.pre);
            fill(sig.post, out.post);
            fill(sig.prv, out.prv);
            for (int v : action.checked_only_pre) {
                VariableSignature vsig = variable_signature(problem, v);
                int target = clone.variable_index(
                    replace_token(vsig.token, kExAg, me));
                out.checked_only_pre.push_back(target);
            }
            int index = static_cast<int>(clone.actions.size());
            clone.actions.push_back(std::move(out));
            clone.agents[static_cast<std::size_t>(i)].actions.push_back(index);
        }
    }

    clone.init = PartialState(clone.variables.size());
    clone.goal = PartialState(clone.variables.size());
    for (std::size_t v = 0; v < clone.variables.size(); ++v) {
        const VarOrigin &origin = origins[v];
        const Variable &source =
            problem.variables[static_cast<std::size_t>(origin.source)];
        const std::string raw_init =
            source.domain[static_cast<std::size_t>(
                problem.init[static_cast<std::size_t>(origin.source)])];
        std::string mapped;
        if (origin.clone < 0) {
            mapped = map_world_value(raw_init);
        } else {
            // Representative's initial agent state, re-owned by the clone.
            std::string sig_value = raw_init;
            for (const auto &other : ids)
                sig_value = replace_token(sig_value, other, kExAg);
            mapped = replace_token(
                sig_value, kExAg,
                clones[static_cast<std::size_t>(origin.clone)]);
        }
        int value_index = clone.variables[v].value_index(mapped);
        if (value_index == kUndefined)
            throw CoopError(ErrorCode::ValueOutOfDomain,
                            "clone init value missing for " +
                                clone.variables[v].name);
        clone.init.set(v, value_index);
        if (origin.clone < 0 &&
            problem.goal.defined(static_cast<std::size_t>(origin.source))) {
            const std::string raw_goal =
                source.domain[static_cast<std::size_t>(
                    problem.goal[static_cast<std::size_t>(origin.source)])];
            int goal_index =
                clone.variables[v].value_index(map_world_value(raw_goal));
            if (goal_index == kUndefined)
                throw CoopError(ErrorCode::ValueOutOfDomain,
                                "clone goal value missing for " +
                                    clone.variables[v].name);
            clone.goal.set(v, goal_index);
        }
    }
    for (std::size_t g = 0; g < clone.agents.size(); ++g)
        for (std::size_t v = 0; v < clone.variables.size(); ++v)
            if (clone.variables[v].agent_ref == clone.agents[g].id)
                clone.agents[g].agent_vars.push_back(static_cast<int>(v));

    validate_problem(clone, {.require_multiple_agents = false});
    return clone;
}

Verdict verify_bound(const MapProblem &problem, int n,
                     const SearchConfig &config) {
    MapProblem clone = clone_team_problem(problem, n);

    // Local state space of one clone: the product of its agent variable
    // domains. All clones share the same shape.
    const Agent &first = clone.agents[0];
    std::vector<int> local_vars = first.agent_vars;
    long local_states = 1;
    for (int v : local_vars)
        local_states *= static_cast<long>(
            clone.variables[static_cast<std::size_t>(v)].domain.size());
    if (local_states == 0)
        local_states = 1;

    // Multisets of per-clone local states, non-decreasing sequences.
    std::vector<std::vector<long>> assignments;
    std::vector<long> current(static_cast<std::size_t>(n), 0);
    long budget = config.max_bound_assignments;
    bool overflow = false;
    auto recurse = [&](auto &&self, int position, long minimum) -> void {
        if (overflow)
            return;
        if (position == n) {
            if (static_cast<long>(assignments.size()) >= budget) {
                overflow = true;
                return;
            }
            assignments.push_back(current);
            return;
        }
        for (long s = minimum; s < local_states; ++s) {
            current[static_cast<std::size_t>(position)] = s;
            self(self, position + 1, s);
        }
    };
    recurse(recurse, 0, 0);
    if (overflow)
        return Verdict::Indeterminate;

    std::vector<int> all;
    for (std::size_t g = 0; g < clone.agents.size(); ++g)
        all.push_back(static_cast<int>(g));

    bool saw_cap = false;
    for (const auto &assignment : assignments) {
        MapProblem instance = clone;
        for (int i = 0; i < n; ++i) {
            long code = assignment[static_cast<std::size_t>(i)];
            const Agent &agent = instance.agents[static_cast<std::size_t>(i)];
            for (int v : agent.agent_vars) {
                long size = static_cast<long>(
                    instance.variables[static_cast<std::size_t>(v)]
                        .domain.size());
                instance.init.set(static_cast<std::size_t>(v),
                                  static_cast<int>(code % size));
                code /= size;
            }
        }
        SolveResult result = solve(instance, all, config);
        if (result.status == SolveStatus::Solved)
            return Verdict::Yes;
        if (result.status == SolveStatus::Indeterminate)
            saw_cap = true;
    }
    return saw_cap ? Verdict::Indeterminate : Verdict::No;
}

}  // namespace coopcheck
