#include "coopcheck/causal.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "coopcheck/signatures.hpp"
#include "coopcheck/tokens.hpp"

namespace coopcheck {

namespace {

std::string substitute_all_agents(const MapProblem &problem,
                                  const std::string &token) {
    const auto ids = problem.agent_ids();
    return substitute_token(token, [&](const std::string &t)
                                       -> std::optional<std::string> {
        if (std::find(ids.begin(), ids.end(), t) != ids.end())
            return std::string(kExAg);
        return std::nullopt;
    });
}

}  // namespace

int CausalGraph::node_index(const std::string &label) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].label == label)
            return static_cast<int>(i);
    return -1;
}

bool CausalGraph::has_directed(int from, int to) const {
    return std::any_of(directed.begin(), directed.end(),
                       [&](const DirectedEdge &e) {
                           return e.from == from && e.to == to;
                       });
}

bool CausalGraph::has_undirected(int a, int b) const {
    if (a > b)
        std::swap(a, b);
    return std::any_of(undirected.begin(), undirected.end(),
                       [&](const UndirectedEdge &e) {
                           return e.a == a && e.b == b;
                       });
}

void CausalGraph::add_directed(int from, int to, const std::string &action) {
    for (auto &edge : directed)
        if (edge.from == from && edge.to == to) {
            if (std::find(edge.actions.begin(), edge.actions.end(), action) ==
                edge.actions.end())
                edge.actions.push_back(action);
            return;
        }
    directed.push_back({from, to, {action}});
}

void CausalGraph::add_undirected(int a, int b, const std::string &action) {
    if (a > b)
        std::swap(a, b);
    for (auto &edge : undirected)
        if (edge.a == a && edge.b == b) {
            if (std::find(edge.actions.begin(), edge.actions.end(), action) ==
                edge.actions.end())
                edge.actions.push_back(action);
            return;
        }
    undirected.push_back({a, b, {action}});
}

void CausalGraph::derive_edges() {
    directed.clear();
    undirected.clear();
    for (auto &node : nodes)
        node.is_static = true;
    for (const auto &action : actions)
        for (const auto &[node, value] : action.updates) {
            (void)value;
            nodes[static_cast<std::size_t>(node)].is_static = false;
        }
    for (const auto &action : actions) {
        // An undirected edge joins every pair of co-updated variables.
        for (std::size_t i = 0; i < action.updates.size(); ++i)
            for (std::size_t j = i + 1; j < action.updates.size(); ++j)
                if (action.updates[i].first != action.updates[j].first)
                    add_undirected(action.updates[i].first,
                                   action.updates[j].first, action.name);
        // A directed edge runs from each prevail variable to each update.
        for (const auto &[prv_node, prv_value] : action.prvs) {
            (void)prv_value;
            for (const auto &[post_node, post_value] : action.updates) {
                (void)post_value;
                if (prv_node != post_node)
                    add_directed(prv_node, post_node, action.name);
            }
        }
    }
}

// ---- builders --------------------------------------------------------------

namespace {

// Projects problem actions onto a node layout given by node_of_var
// (-1 entries are excluded variables) with an optional value relabeling.
GraphAction project_action(const MapProblem &problem, const Action &action,
                           const std::vector<int> &node_of_var,
                           const CausalGraph &graph, bool signature_values) {
    GraphAction out;
    out.name = action.name;
    auto map_value = [&](int var, int raw_value, int node) {
        const std::string &raw =
            problem.variables[static_cast<std::size_t>(var)]
                .domain[static_cast<std::size_t>(raw_value)];
        const std::string mapped =
            signature_values ? substitute_all_agents(problem, raw) : raw;
        const auto &domain =
            graph.nodes[static_cast<std::size_t>(node)].domain;
        auto it = std::find(domain.begin(), domain.end(), mapped);
        if (it == domain.end())
            throw CoopError(ErrorCode::Structural,
                            "value " + mapped + " missing from node domain");
        return static_cast<int>(it - domain.begin());
    };
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        int node = node_of_var[v];
        if (node < 0) {
            if (action.pre.defined(v) || action.post.defined(v) ||
                action.prv.defined(v))
                throw CoopError(ErrorCode::Structural,
                                action.name +
                                    " touches a variable outside the graph");
            continue;
        }
        if (action.pre.defined(v))
            out.pres.emplace_back(
                node, map_value(static_cast<int>(v), action.pre[v], node));
        if (action.prv.defined(v))
            out.prvs.emplace_back(
                node, map_value(static_cast<int>(v), action.prv[v], node));
        if (action.post.defined(v))
            out.updates.emplace_back(
                node, map_value(static_cast<int>(v), action.post[v], node));
    }
    return out;
}

CausalNode make_node(const MapProblem &problem, int var,
                     bool signature_values) {
    const Variable &variable = problem.variables[static_cast<std::size_t>(var)];
    CausalNode node;
    node.label = signature_values
                     ? substitute_all_agents(problem, variable.name)
                     : variable.name;
    if (signature_values) {
        for (const auto &value : variable.domain) {
            std::string mapped = substitute_all_agents(problem, value);
            if (std::find(node.domain.begin(), node.domain.end(), mapped) ==
                node.domain.end())
                node.domain.push_back(mapped);
        }
    } else {
        node.domain = variable.domain;
    }
    node.agent_vs = variable.agent_ref.has_value();
    node.in_goal = problem.goal.defined(static_cast<std::size_t>(var));
    const std::string raw_init =
        variable.domain[static_cast<std::size_t>(
            problem.init[static_cast<std::size_t>(var)])];
    const std::string mapped_init =
        signature_values ? substitute_all_agents(problem, raw_init) : raw_init;
    node.init_value = static_cast<int>(
        std::find(node.domain.begin(), node.domain.end(), mapped_init) -
        node.domain.begin());
    return node;
}

CausalGraph build_graph(const MapProblem &problem,
                        const std::vector<int> &variables,
                        const std::vector<int> &action_indices,
                        bool signature_values) {
    CausalGraph graph;
    std::vector<int> node_of_var(problem.variables.size(), -1);
    for (int v : variables) {
        node_of_var[static_cast<std::size_t>(v)] =
            static_cast<int>(graph.nodes.size());
        graph.nodes.push_back(make_node(problem, v, signature_values));
    }
    for (int a : action_indices)
        graph.actions.push_back(project_action(
            problem, problem.actions[static_cast<std::size_t>(a)], node_of_var,
            graph, signature_values));
    graph.derive_edges();
    return graph;
}

}  // namespace

CausalGraph build_causal_graph(const MapProblem &problem) {
    std::vector<int> variables(problem.variables.size());
    std::iota(variables.begin(), variables.end(), 0);
    std::vector<int> actions(problem.actions.size());
    std::iota(actions.begin(), actions.end(), 0);
    return build_graph(problem, variables, actions, false);
}

CausalGraph build_agent_causal_graph(const MapProblem &problem, int agent) {
    if (agent < 0 || agent >= static_cast<int>(problem.agents.size()))
        throw CoopError(ErrorCode::UnknownAgent, "agent index out of range");
    std::vector<int> variables;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        const auto &ref = problem.variables[v].agent_ref;
        if (!ref || *ref == problem.agents[static_cast<std::size_t>(agent)].id)
            variables.push_back(static_cast<int>(v));
    }
    return build_graph(problem, variables,
                       problem.agents[static_cast<std::size_t>(agent)].actions,
                       false);
}

Icgs build_icgs(const MapProblem &problem) {
    if (!is_homogeneous_team(problem))
        throw CoopError(ErrorCode::NotHomogeneous,
                        "the ICGS is defined for homogeneous teams only");
    const Agent &rep = problem.agents[0];
    std::vector<int> variables;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
        const auto &ref = problem.variables[v].agent_ref;
        if (!ref || *ref == rep.id)
            variables.push_back(static_cast<int>(v));
    }
    Icgs icgs;
    icgs.graph = build_graph(problem, variables, rep.actions, true);
    for (std::size_t i = 0; i < icgs.graph.nodes.size(); ++i)
        if (icgs.graph.nodes[i].agent_vs)
            icgs.agent_vs_nodes.push_back(static_cast<int>(i));
    return icgs;
}

// ---- inner closures --------------------------------------------------------

std::vector<InnerClosure> inner_closures(const CausalGraph &graph) {
    const std::size_t n = graph.nodes.size();
    std::vector<int> component(n, -1);
    int num_components = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (component[start] != -1)
            continue;
        int id = num_components++;
        std::deque<std::size_t> queue = {start};
        component[start] = id;
        while (!queue.empty()) {
            std::size_t node = queue.front();
            queue.pop_front();
            for (const auto &edge : graph.undirected) {
                int other = -1;
                if (edge.a == static_cast<int>(node))
                    other = edge.b;
                else if (edge.b == static_cast<int>(node))
                    other = edge.a;
                if (other >= 0 && component[static_cast<std::size_t>(other)] ==
                                      -1) {
                    component[static_cast<std::size_t>(other)] = id;
                    queue.push_back(static_cast<std::size_t>(other));
                }
            }
        }
    }
    std::vector<InnerClosure> closures(
        static_cast<std::size_t>(num_components));
    for (std::size_t v = 0; v < n; ++v)
        closures[static_cast<std::size_t>(component[v])].vars.push_back(
            static_cast<int>(v));
    for (auto &ic : closures) {
        std::set<int> members(ic.vars.begin(), ic.vars.end());
        std::set<int> oc;
        for (const auto &edge : graph.directed)
            if (members.count(edge.to) && !members.count(edge.from))
                oc.insert(edge.from);
        ic.oc.assign(oc.begin(), oc.end());
    }
    return closures;
}

// ---- traversability --------------------------------------------------------

Verdict is_traversable(const CausalGraph &graph, const InnerClosure &ic,
                       long cap) {
    // Static variables hold their initial values and do not influence
    // traversability, whether they sit inside or outside the closure; the
    // traversal space ranges over the dynamic members only.
    std::vector<int> members;
    for (int v : ic.vars)
        if (!graph.nodes[static_cast<std::size_t>(v)].is_static)
            members.push_back(v);
    if (members.empty())
        return Verdict::Yes;  // frozen closures count as traversable

    std::vector<int> position(graph.nodes.size(), -1);
    std::vector<long> radix;
    long product = 1;
    for (std::size_t i = 0; i < members.size(); ++i) {
        position[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
        long size = static_cast<long>(
            graph.nodes[static_cast<std::size_t>(members[i])].domain.size());
        radix.push_back(size);
        if (product > cap / std::max<long>(size, 1))
            return Verdict::Indeterminate;
        product *= size;
    }
    if (product <= 1)
        return Verdict::Yes;

    struct Transition {
        std::vector<std::pair<int, int>> conditions;  // (position, value)
        std::vector<std::pair<int, int>> writes;
    };
    std::vector<Transition> transitions;
    for (const auto &action : graph.actions) {
        if (action.updates.empty())
            continue;
        bool inside = std::all_of(
            action.updates.begin(), action.updates.end(),
            [&](const std::pair<int, int> &u) {
                return position[static_cast<std::size_t>(u.first)] >= 0;
            });
        if (!inside)
            continue;
        Transition t;
        bool usable = true;
        auto classify = [&](const std::vector<std::pair<int, int>> &conds) {
            for (const auto &[node, value] : conds) {
                int pos = position[static_cast<std::size_t>(node)];
                if (pos >= 0) {
                    t.conditions.emplace_back(pos, value);
                    continue;
                }
                const CausalNode &outside =
                    graph.nodes[static_cast<std::size_t>(node)];
                if (outside.is_static) {
                    // Statics hold their initial values.
                    if (outside.init_value == kUndefined)
                        throw CoopError(ErrorCode::Structural,
                                        "static node " + outside.label +
                                            " lacks an initial value");
                    if (outside.init_value != value)
                        usable = false;
                }
                // Dynamic outside variables move freely.
            }
        };
        classify(action.pres);
        classify(action.prvs);
        if (!usable)
            continue;
        for (const auto &[node, value] : action.updates)
            t.writes.emplace_back(position[static_cast<std::size_t>(node)],
                                  value);
        transitions.push_back(std::move(t));
    }

    auto decode = [&](long code, std::vector<int> &values) {
        for (std::size_t i = 0; i < radix.size(); ++i) {
            values[i] = static_cast<int>(code % radix[i]);
            code /= radix[i];
        }
    };
    auto encode = [&](const std::vector<int> &values) {
        long code = 0;
        for (std::size_t i = radix.size(); i-- > 0;)
            code = code * radix[i] + values[i];
        return code;
    };

    std::vector<std::vector<int>> forward(static_cast<std::size_t>(product));
    std::vector<std::vector<int>> backward(static_cast<std::size_t>(product));
    std::vector<int> values(members.size());
    for (long code = 0; code < product; ++code) {
        decode(code, values);
        for (const auto &t : transitions) {
            bool ok = std::all_of(t.conditions.begin(), t.conditions.end(),
                                  [&](const std::pair<int, int> &c) {
                                      return values[static_cast<std::size_t>(
                                                 c.first)] == c.second;
                                  });
            if (!ok)
                continue;
            std::vector<int> next = values;
            for (const auto &[pos, value] : t.writes)
                next[static_cast<std::size_t>(pos)] = value;
            long target = encode(next);
            if (target != code) {
                forward[static_cast<std::size_t>(code)].push_back(
                    static_cast<int>(target));
                backward[static_cast<std::size_t>(target)].push_back(
                    static_cast<int>(code));
            }
        }
    }

    auto covers_all = [&](const std::vector<std::vector<int>> &adjacency) {
        std::vector<char> seen(static_cast<std::size_t>(product), 0);
        std::deque<int> queue = {0};
        seen[0] = 1;
        long count = 1;
        while (!queue.empty()) {
            int node = queue.front();
            queue.pop_front();
            for (int next : adjacency[static_cast<std::size_t>(node)])
                if (!seen[static_cast<std::size_t>(next)]) {
                    seen[static_cast<std::size_t>(next)] = 1;
                    ++count;
                    queue.push_back(next);
                }
        }
        return count == product;
    };
    return covers_all(forward) && covers_all(backward) ? Verdict::Yes
                                                       : Verdict::No;
}

Verdict graph_traversable(const CausalGraph &graph, long cap,
                          int union_limit) {
    const auto closures = inner_closures(graph);
    bool indeterminate = false;
    auto account = [&](Verdict v) {
        if (v == Verdict::No)
            return true;
        if (v == Verdict::Indeterminate)
            indeterminate = true;
        return false;
    };
    for (const auto &ic : closures)
        if (account(is_traversable(graph, ic, cap)))
            return Verdict::No;
    if (union_limit > 1 && closures.size() > 1) {
        // Unions of up to union_limit components, smallest index sets first.
        std::vector<std::size_t> pick;
        auto check_union = [&](const std::vector<std::size_t> &chosen) {
            InnerClosure merged;
            std::set<int> members;
            for (std::size_t c : chosen)
                members.insert(closures[c].vars.begin(),
                               closures[c].vars.end());
            merged.vars.assign(members.begin(), members.end());
            std::set<int> oc;
            for (const auto &edge : graph.directed)
                if (members.count(edge.to) && !members.count(edge.from))
                    oc.insert(edge.from);
            merged.oc.assign(oc.begin(), oc.end());
            return is_traversable(graph, merged, cap);
        };
        auto recurse = [&](auto &&self, std::size_t start) -> Verdict {
            if (pick.size() >= 2) {
                Verdict v = check_union(pick);
                if (v == Verdict::No)
                    return v;
                if (v == Verdict::Indeterminate)
                    indeterminate = true;
            }
            if (pick.size() == static_cast<std::size_t>(union_limit))
                return Verdict::Yes;
            for (std::size_t c = start; c < closures.size(); ++c) {
                pick.push_back(c);
                Verdict v = self(self, c + 1);
                pick.pop_back();
                if (v == Verdict::No)
                    return v;
            }
            return Verdict::Yes;
        };
        if (recurse(recurse, 0) == Verdict::No)
            return Verdict::No;
    }
    return indeterminate ? Verdict::Indeterminate : Verdict::Yes;
}

// ---- causal loops ----------------------------------------------------------

namespace {

struct Arc {
    int from;
    int to;
    bool is_directed;   // original directed edge
    int undirected_id;  // -1 for directed arcs
};

struct ArcGraph {
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out;  // arc indices per node

    explicit ArcGraph(const CausalGraph &graph) {
        out.resize(graph.nodes.size());
        for (const auto &edge : graph.directed)
            push({edge.from, edge.to, true, -1});
        for (std::size_t e = 0; e < graph.undirected.size(); ++e) {
            const auto &edge = graph.undirected[e];
            push({edge.a, edge.b, false, static_cast<int>(e)});
            push({edge.b, edge.a, false, static_cast<int>(e)});
        }
    }
    void push(Arc arc) {
        out[static_cast<std::size_t>(arc.from)].push_back(
            static_cast<int>(arcs.size()));
        arcs.push_back(arc);
    }
};

// Shortest mixed path from `from` to `to`; returns the node sequence
// including both endpoints, or empty if unreachable.
std::vector<int> mixed_path(const ArcGraph &g, int from, int to) {
    std::vector<int> via(g.out.size(), -2);
    std::deque<int> queue = {from};
    via[static_cast<std::size_t>(from)] = -1;
    while (!queue.empty()) {
        int node = queue.front();
        queue.pop_front();
        if (node == to)
            break;
        for (int a : g.out[static_cast<std::size_t>(node)]) {
            int next = g.arcs[static_cast<std::size_t>(a)].to;
            if (via[static_cast<std::size_t>(next)] == -2) {
                via[static_cast<std::size_t>(next)] = node;
                queue.push_back(next);
            }
        }
    }
    if (via[static_cast<std::size_t>(to)] == -2)
        return {};
    std::vector<int> path;
    for (int node = to; node != -1; node = via[static_cast<std::size_t>(node)])
        path.push_back(node);
    std::reverse(path.begin(), path.end());
    return path;
}

// Simple path from `from` to `to` that uses at least one directed arc and
// never the arcs of undirected edge `banned`. Depth-first, deterministic.
bool directed_simple_path(const ArcGraph &g, int from, int to, int banned,
                          std::vector<int> &path, std::vector<char> &visited,
                          bool used_directed, long &budget) {
    if (--budget < 0)
        return false;
    if (from == to)
        return used_directed;
    visited[static_cast<std::size_t>(from)] = 1;
    path.push_back(from);
    for (int a : g.out[static_cast<std::size_t>(from)]) {
        const Arc &arc = g.arcs[static_cast<std::size_t>(a)];
        if (arc.undirected_id == banned && banned >= 0)
            continue;
        if (arc.to != to && visited[static_cast<std::size_t>(arc.to)])
            continue;
        if (arc.to == to && !(used_directed || arc.is_directed))
            continue;
        if (directed_simple_path(g, arc.to, to, banned, path, visited,
                                 used_directed || arc.is_directed, budget))
            return true;
    }
    path.pop_back();
    visited[static_cast<std::size_t>(from)] = 0;
    return false;
}

std::vector<int> canonical_cycle(std::vector<int> cycle) {
    auto smallest =
        std::min_element(cycle.begin(), cycle.end()) - cycle.begin();
    std::rotate(cycle.begin(), cycle.begin() + smallest, cycle.end());
    return cycle;
}

}  // namespace

LoopReport find_causal_loops(const CausalGraph &graph, std::size_t max_loops,
                             long step_budget) {
    LoopReport report;
    ArcGraph arcs(graph);
    std::set<std::vector<int>> seen;
    long budget = step_budget;

    auto note_loop = [&](std::vector<int> cycle) {
        std::vector<int> canon = canonical_cycle(std::move(cycle));
        if (!seen.insert(canon).second)
            return;
        if (report.loops.size() >= max_loops) {
            report.truncated = true;
            return;
        }
        CausalLoop loop;
        loop.nodes = std::move(canon);
        loop.contains_agent_vs = std::any_of(
            loop.nodes.begin(), loop.nodes.end(), [&](int n) {
                return graph.nodes[static_cast<std::size_t>(n)].agent_vs;
            });
        report.loops.push_back(std::move(loop));
    };

    // Every directed edge on a cycle: close it with any mixed return path.
    for (const auto &edge : graph.directed) {
        std::vector<int> back = mixed_path(arcs, edge.to, edge.from);
        if (back.empty())
            continue;
        std::vector<int> cycle = {edge.from};
        cycle.insert(cycle.end(), back.begin(), back.end() - 1);
        note_loop(std::move(cycle));
    }
    // Every undirected edge on a causal loop: orient it and come back over
    // a simple path carrying at least one directed arc.
    for (std::size_t e = 0; e < graph.undirected.size(); ++e) {
        const auto &edge = graph.undirected[e];
        for (const auto &[head, tail] :
             {std::pair{edge.a, edge.b}, std::pair{edge.b, edge.a}}) {
            std::vector<int> path;
            std::vector<char> visited(graph.nodes.size(), 0);
            if (directed_simple_path(arcs, tail, head, static_cast<int>(e),
                                     path, visited, false, budget)) {
                // path holds tail..(before head); the cycle is
                // head -(e)-> tail -> ... -> head.
                std::vector<int> cycle = {head};
                cycle.insert(cycle.end(), path.begin(), path.end());
                note_loop(std::move(cycle));
                break;
            }
            if (budget <= 0) {
                report.truncated = true;
                break;
            }
        }
        if (budget <= 0)
            break;
    }
    return report;
}

// ---- level decomposition ---------------------------------------------------

std::vector<std::vector<int>> level_decomposition(const CausalGraph &graph) {
    LoopReport loops = find_causal_loops(graph);
    if (!loops.loops.empty() || loops.truncated)
        throw CoopError(ErrorCode::NotAcyclic,
                        "causal loop present; no level decomposition");

    const auto closures = inner_closures(graph);
    std::vector<int> component(graph.nodes.size(), -1);
    for (std::size_t c = 0; c < closures.size(); ++c)
        for (int v : closures[c].vars)
            component[static_cast<std::size_t>(v)] = static_cast<int>(c);

    // Longest-path layering of the component DAG.
    const std::size_t m = closures.size();
    std::vector<std::set<int>> successors(m);
    std::vector<int> indegree(m, 0);
    for (const auto &edge : graph.directed) {
        int cf = component[static_cast<std::size_t>(edge.from)];
        int ct = component[static_cast<std::size_t>(edge.to)];
        if (cf == ct)
            throw CoopError(ErrorCode::NotAcyclic,
                            "directed edge inside an undirected component");
        if (successors[static_cast<std::size_t>(cf)].insert(ct).second)
            ++indegree[static_cast<std::size_t>(ct)];
    }
    std::vector<int> depth(m, 0);
    std::deque<int> queue;
    for (std::size_t c = 0; c < m; ++c)
        if (indegree[c] == 0)
            queue.push_back(static_cast<int>(c));
    std::size_t processed = 0;
    int max_depth = 0;
    while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        ++processed;
        for (int next : successors[static_cast<std::size_t>(c)]) {
            depth[static_cast<std::size_t>(next)] =
                std::max(depth[static_cast<std::size_t>(next)],
                         depth[static_cast<std::size_t>(c)] + 1);
            max_depth = std::max(max_depth,
                                 depth[static_cast<std::size_t>(next)]);
            if (--indegree[static_cast<std::size_t>(next)] == 0)
                queue.push_back(next);
        }
    }
    if (processed != m)
        throw CoopError(ErrorCode::NotAcyclic,
                        "component graph is not acyclic");

    std::vector<std::vector<int>> levels(
        static_cast<std::size_t>(max_depth + 1));
    for (std::size_t c = 0; c < m; ++c)
        for (int v : closures[c].vars)
            levels[static_cast<std::size_t>(depth[c])].push_back(v);
    for (auto &level : levels)
        std::sort(level.begin(), level.end());
    return levels;
}

std::optional<std::string> check_levels(
    const CausalGraph &graph, const std::vector<std::vector<int>> &levels) {
    std::vector<int> level_of(graph.nodes.size(), -1);
    for (std::size_t l = 0; l < levels.size(); ++l) {
        if (levels[l].empty())
            return "level " + std::to_string(l) + " is empty";
        for (int v : levels[l]) {
            if (v < 0 || v >= static_cast<int>(graph.nodes.size()))
                return "level " + std::to_string(l) +
                       " names an unknown node";
            if (level_of[static_cast<std::size_t>(v)] != -1)
                return graph.nodes[static_cast<std::size_t>(v)].label +
                       " appears in more than one level";
            level_of[static_cast<std::size_t>(v)] = static_cast<int>(l);
        }
    }
    for (std::size_t v = 0; v < graph.nodes.size(); ++v)
        if (level_of[v] == -1)
            return graph.nodes[v].label + " is missing from the levels";
    for (const auto &edge : graph.directed)
        if (level_of[static_cast<std::size_t>(edge.from)] >=
            level_of[static_cast<std::size_t>(edge.to)])
            return "directed edge " +
                   graph.nodes[static_cast<std::size_t>(edge.from)].label +
                   " -> " +
                   graph.nodes[static_cast<std::size_t>(edge.to)].label +
                   " does not go from a higher level to a lower one";
    for (const auto &edge : graph.undirected)
        if (level_of[static_cast<std::size_t>(edge.a)] !=
            level_of[static_cast<std::size_t>(edge.b)])
            return "undirected edge " +
                   graph.nodes[static_cast<std::size_t>(edge.a)].label +
                   " -- " +
                   graph.nodes[static_cast<std::size_t>(edge.b)].label +
                   " crosses levels";
    return std::nullopt;
}

// ---- CR and the expansion transform ----------------------------------------

std::vector<int> compute_cr(const Icgs &icgs) {
    const CausalGraph &graph = icgs.graph;
    LoopReport loops = find_causal_loops(graph);
    std::set<int> cr;
    for (const auto &loop : loops.loops)
        for (int node : loop.nodes)
            if (graph.nodes[static_cast<std::size_t>(node)].agent_vs)
                cr.insert(node);
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto &edge : graph.directed)
            if (cr.count(edge.from) && !cr.count(edge.to) &&
                graph.nodes[static_cast<std::size_t>(edge.to)].agent_vs) {
                cr.insert(edge.to);
                grew = true;
            }
    }
    return {cr.begin(), cr.end()};
}

Icgs expand_cr(const Icgs &icgs, const std::vector<int> &cr) {
    const CausalGraph &graph = icgs.graph;
    std::set<int> expanded(cr.begin(), cr.end());
    for (int v : cr)
        if (v < 0 || v >= static_cast<int>(graph.nodes.size()) ||
            !graph.nodes[static_cast<std::size_t>(v)].agent_vs)
            throw CoopError(ErrorCode::Structural,
                            "CR members must be agent VS nodes");

    Icgs out;
    CausalGraph &g = out.graph;
    // Old node -> new index (non-CR) or per-value replacement indices.
    std::vector<int> moved(graph.nodes.size(), -1);
    std::vector<std::vector<int>> replacements(graph.nodes.size());
    for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
        const CausalNode &node = graph.nodes[v];
        if (!expanded.count(static_cast<int>(v))) {
            moved[v] = static_cast<int>(g.nodes.size());
            g.nodes.push_back(node);
            continue;
        }
        for (std::size_t d = 0; d < node.domain.size(); ++d) {
            CausalNode pinned;
            pinned.label = node.label + "=" + node.domain[d];
            pinned.domain = {node.domain[d]};
            pinned.init_value = 0;
            pinned.agent_vs = true;
            pinned.in_goal = node.in_goal;
            replacements[v].push_back(static_cast<int>(g.nodes.size()));
            g.nodes.push_back(std::move(pinned));
        }
    }

    // Actions that update a CR member are dropped; conditions on a CR member
    // move to the replacement pinned at the required value, where they hold
    // statically.
    for (const auto &action : graph.actions) {
        bool updates_cr = std::any_of(
            action.updates.begin(), action.updates.end(),
            [&](const std::pair<int, int> &u) {
                return expanded.count(u.first) > 0;
            });
        if (updates_cr)
            continue;
        GraphAction remapped;
        remapped.name = action.name;
        auto remap_conditions =
            [&](const std::vector<std::pair<int, int>> &conds,
                std::vector<std::pair<int, int>> &target) {
                for (const auto &[node, value] : conds) {
                    if (expanded.count(node))
                        target.emplace_back(
                            replacements[static_cast<std::size_t>(node)]
                                        [static_cast<std::size_t>(value)],
                            0);
                    else
                        target.emplace_back(
                            moved[static_cast<std::size_t>(node)], value);
                }
            };
        remap_conditions(action.pres, remapped.pres);
        remap_conditions(action.prvs, remapped.prvs);
        for (const auto &[node, value] : action.updates)
            remapped.updates.emplace_back(
                moved[static_cast<std::size_t>(node)], value);
        g.actions.push_back(std::move(remapped));
    }

    // Edge transform mirrors the node transform: duplicate outgoing edges
    // of CR members onto every replacement, drop edges into CR members.
    auto each_new = [&](int old, auto &&fn) {
        if (expanded.count(old)) {
            for (int repl : replacements[static_cast<std::size_t>(old)])
                fn(repl);
        } else {
            fn(moved[static_cast<std::size_t>(old)]);
        }
    };
    for (const auto &edge : graph.directed) {
        if (expanded.count(edge.to))
            continue;  // incoming edges dropped
        each_new(edge.from, [&](int from) {
            for (const auto &name : edge.actions)
                g.add_directed(from, moved[static_cast<std::size_t>(edge.to)],
                               name);
        });
    }
    for (const auto &edge : graph.undirected)
        each_new(edge.a, [&](int a) {
            each_new(edge.b, [&](int b) {
                for (const auto &name : edge.actions)
                    g.add_undirected(a, b, name);
            });
        });

    for (auto &node : g.nodes)
        node.is_static = true;
    for (const auto &action : g.actions)
        for (const auto &[node, value] : action.updates) {
            (void)value;
            g.nodes[static_cast<std::size_t>(node)].is_static = false;
        }

    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (g.nodes[i].agent_vs)
            out.agent_vs_nodes.push_back(static_cast<int>(i));
    return out;
}

// ---- bounds ----------------------------------------------------------------

const char *applicability_name(Applicability a) {
    switch (a) {
    case Applicability::Applicable: return "applicable";
    case Applicability::NotApplicable: return "not-applicable";
    case Applicability::Indeterminate: return "indeterminate";
    }
    return "not-applicable";
}

namespace {

bool agent_vs_edges_all_directed(const CausalGraph &graph) {
    return std::none_of(
        graph.undirected.begin(), graph.undirected.end(),
        [&](const UndirectedEdge &edge) {
            return graph.nodes[static_cast<std::size_t>(edge.a)].agent_vs ||
                   graph.nodes[static_cast<std::size_t>(edge.b)].agent_vs;
        });
}

}  // namespace

BoundResult bound_lemma2(const Icgs &icgs, long traversal_cap) {
    BoundResult result;
    const CausalGraph &graph = icgs.graph;
    LoopReport loops = find_causal_loops(graph);
    bool loops_complete = !loops.truncated;
    bool every_loop_has_agent_vs =
        std::all_of(loops.loops.begin(), loops.loops.end(),
                    [](const CausalLoop &loop) {
                        return loop.contains_agent_vs;
                    });
    // The literal hypothesis text; reported alongside the reading used.
    bool no_loop_has_agent_vs =
        std::none_of(loops.loops.begin(), loops.loops.end(),
                     [](const CausalLoop &loop) {
                         return loop.contains_agent_vs;
                     });
    bool edges_directed = agent_vs_edges_all_directed(graph);

    std::vector<int> cr = compute_cr(icgs);
    Icgs expanded = expand_cr(icgs, cr);
    Verdict expanded_traversable =
        graph_traversable(expanded.graph, traversal_cap);

    result.preconditions = {
        {"every_causal_loop_contains_an_agent_vs", every_loop_has_agent_vs},
        {"paper_literal_no_causal_loop_contains_an_agent_vs",
         no_loop_has_agent_vs},
        {"agent_vs_edges_all_directed", edges_directed},
        {"icgs_traversable_after_expansion",
         expanded_traversable == Verdict::Yes},
        {"loop_enumeration_complete", loops_complete},
    };
    for (int v : cr)
        result.over.push_back(
            graph.nodes[static_cast<std::size_t>(v)].label);

    long long value = 1;
    for (int v : cr)
        value *= static_cast<long long>(
            graph.nodes[static_cast<std::size_t>(v)].domain.size());
    result.value = value;

    if (!edges_directed || (loops_complete && !every_loop_has_agent_vs) ||
        expanded_traversable == Verdict::No)
        result.status = Applicability::NotApplicable;
    else if (!loops_complete || expanded_traversable == Verdict::Indeterminate)
        result.status = Applicability::Indeterminate;
    else
        result.status = Applicability::Applicable;
    return result;
}

BoundResult bound_lemma3(const Icgs &icgs, Verdict problem_solvable) {
    BoundResult result;
    const CausalGraph &graph = icgs.graph;
    bool edges_directed = agent_vs_edges_all_directed(graph);
    result.preconditions = {
        {"problem_solvable", problem_solvable == Verdict::Yes},
        {"agent_vs_edges_all_directed", edges_directed},
    };
    long long value = 1;
    for (int v : icgs.agent_vs_nodes) {
        result.over.push_back(
            graph.nodes[static_cast<std::size_t>(v)].label);
        value *= static_cast<long long>(
            graph.nodes[static_cast<std::size_t>(v)].domain.size());
    }
    result.value = value;
    if (!edges_directed)
        result.status = Applicability::NotApplicable;
    else if (problem_solvable == Verdict::Yes)
        result.status = Applicability::Applicable;
    else if (problem_solvable == Verdict::Indeterminate)
        result.status = Applicability::Indeterminate;
    else
        result.status = Applicability::NotApplicable;
    return result;
}

Theorem1Result theorem1_certificate(const MapProblem &problem,
                                    long traversal_cap) {
    Theorem1Result result;
    if (!is_homogeneous_team(problem)) {
        result.granted = Verdict::No;
        result.reasons.push_back("team is heterogeneous (DVC holds)");
        return result;
    }
    Icgs icgs = build_icgs(problem);
    LoopReport loops = find_causal_loops(icgs.graph);
    Verdict traversable = icgs_traversable(icgs, traversal_cap);

    bool refused = false;
    bool capped = false;
    if (!loops.loops.empty()) {
        refused = true;
        result.reasons.push_back("causal loop present in the ICGS");
    }
    if (loops.truncated) {
        capped = true;
        result.reasons.push_back("loop enumeration truncated");
    }
    if (traversable == Verdict::No) {
        refused = true;
        result.reasons.push_back("ICGS has a non-traversable inner closure");
    } else if (traversable == Verdict::Indeterminate) {
        capped = true;
        result.reasons.push_back("traversability check capped");
    }

    if (refused) {
        result.granted = Verdict::No;
    } else if (capped) {
        result.granted = Verdict::Indeterminate;
    } else {
        result.granted = Verdict::Yes;
        for (const auto &level : level_decomposition(icgs.graph)) {
            std::vector<std::string> labels;
            for (int v : level)
                labels.push_back(
                    icgs.graph.nodes[static_cast<std::size_t>(v)].label);
            result.levels.push_back(std::move(labels));
        }
    }
    return result;
}

}  // namespace coopcheck
