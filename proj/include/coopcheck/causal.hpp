#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopcheck/model.hpp"

namespace coopcheck {

constexpr long kDefaultTraversalCap = 200'000;

struct CausalNode {
    std::string label;
    std::vector<std::string> domain;
    int init_value = kUndefined;  // index into domain
    bool agent_vs = false;
    bool in_goal = false;
    bool is_static = false;  // no action updates it
};

struct DirectedEdge {
    int from = -1;
    int to = -1;
    std::vector<std::string> actions;  // contributing action names
};

struct UndirectedEdge {
    int a = -1;  // a < b
    int b = -1;
    std::vector<std::string> actions;
};

// Action projected onto graph nodes. Prevail conditions are kept apart from
// preconditions because only prevails introduce directed edges.
struct GraphAction {
    std::string name;
    std::vector<std::pair<int, int>> pres;     // (node, value index)
    std::vector<std::pair<int, int>> prvs;
    std::vector<std::pair<int, int>> updates;  // post
};

struct CausalGraph {
    std::vector<CausalNode> nodes;
    std::vector<DirectedEdge> directed;
    std::vector<UndirectedEdge> undirected;
    std::vector<GraphAction> actions;

    int node_index(const std::string &label) const;
    bool has_directed(int from, int to) const;
    bool has_undirected(int a, int b) const;
    void add_directed(int from, int to, const std::string &action);
    void add_undirected(int a, int b, const std::string &action);
    // Recomputes static flags and the edge set from `actions`.
    void derive_edges();
};

// Individual causal graph signature: the causal graph of one representative
// agent of a homogeneous team, with agent variables replaced by their VSs.
struct Icgs {
    CausalGraph graph;
    std::vector<int> agent_vs_nodes;
};

CausalGraph build_causal_graph(const MapProblem &problem);
// One agent's own causal graph: its agent variables plus all non-agent
// variables, raw names.
CausalGraph build_agent_causal_graph(const MapProblem &problem, int agent);
// Throws NotHomogeneous unless the team satisfies N-DVC.
Icgs build_icgs(const MapProblem &problem);

struct InnerClosure {
    std::vector<int> vars;
    std::vector<int> oc;
};

// Minimal inner closures: connected components of the undirected subgraph,
// each with its outer closure.
std::vector<InnerClosure> inner_closures(const CausalGraph &graph);

// Traversable state space of one inner closure: every pair of IC states is
// connected by transitions whose conditions on dynamic outside variables
// are treated as freely satisfiable and whose conditions on static outside
// variables must match their initial values. An IC of static variables
// counts as traversable.
Verdict is_traversable(const CausalGraph &graph, const InnerClosure &ic,
                       long cap = kDefaultTraversalCap);

// Conjunction over all minimal ICs; union_limit > 1 additionally checks
// unions of up to that many components.
Verdict graph_traversable(const CausalGraph &graph,
                          long cap = kDefaultTraversalCap,
                          int union_limit = 1);
inline Verdict icgs_traversable(const Icgs &icgs,
                                long cap = kDefaultTraversalCap,
                                int union_limit = 1) {
    return graph_traversable(icgs.graph, cap, union_limit);
}

struct CausalLoop {
    std::vector<int> nodes;  // cycle order; the first node is not repeated
    bool contains_agent_vs = false;
};

struct LoopReport {
    std::vector<CausalLoop> loops;
    bool truncated = false;
};

// Directed cycles that contain at least one directed edge; undirected edges
// may be traversed either way. Reports a covering set: every edge lying on
// some causal loop appears in some reported loop.
LoopReport find_causal_loops(const CausalGraph &graph,
                             std::size_t max_loops = 256,
                             long step_budget = 4'000'000);

// Greedy topological layering of the undirected components, highest level
// first. Throws NotAcyclic when a causal loop exists.
std::vector<std::vector<int>> level_decomposition(const CausalGraph &graph);

// Independent validator for a proposed leveling: partition, directed edges
// strictly high to low, undirected edges within a level. Returns the first
// violation, or nullopt if valid.
std::optional<std::string> check_levels(
    const CausalGraph &graph, const std::vector<std::vector<int>> &levels);

// Fixpoint of: seed with the agent VSs on causal loops, then add any agent
// VS with a directed edge into it from a member.
std::vector<int> compute_cr(const Icgs &icgs);

// Loop-breaking transform: each member of `cr` becomes one single-valued
// node per domain value; outgoing edges are duplicated onto every
// replacement, incoming edges are dropped.
Icgs expand_cr(const Icgs &icgs, const std::vector<int> &cr);

enum class Applicability { Applicable, NotApplicable, Indeterminate };

const char *applicability_name(Applicability a);

struct BoundResult {
    Applicability status = Applicability::NotApplicable;
    long long value = 0;  // meaningful when applicable
    // Named hypotheses with their outcomes.
    std::vector<std::pair<std::string, bool>> preconditions;
    std::vector<std::string> over;  // node labels the product ranges over
};

// Minimum-team-size bound over CR(Phi) when loops are breakable and the
// expanded graph stays traversable.
BoundResult bound_lemma2(const Icgs &icgs,
                         long traversal_cap = kDefaultTraversalCap);
// Bound over all agent VSs; solvability is supplied by the caller.
BoundResult bound_lemma3(const Icgs &icgs, Verdict problem_solvable);

struct Theorem1Result {
    Verdict granted = Verdict::Indeterminate;
    std::vector<std::string> reasons;  // failed or capped conditions
    std::vector<std::vector<std::string>> levels;  // evidence when granted
};

// Certificate that any single agent can achieve the goal: homogeneous team,
// traversable ICGS, no causal loops. Solvability is the caller's duty.
Theorem1Result theorem1_certificate(const MapProblem &problem,
                                    long traversal_cap = kDefaultTraversalCap);

}  // namespace coopcheck
