#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopcheck/model.hpp"

namespace coopcheck {

struct SearchConfig {
    // Cap on distinct joint states; search reports indeterminate beyond it.
    long max_states = 2'000'000;
    std::optional<int> max_plan_len;
    // Cap on initial-state assignments enumerated by verify_bound.
    long max_bound_assignments = 200'000;
};

enum class SolveStatus { Solved, Unsolvable, Indeterminate };

struct SolveResult {
    SolveStatus status = SolveStatus::Indeterminate;
    Plan plan;         // meaningful when status == Solved
    long states_seen = 0;
    std::string note;  // cap diagnostics
};

// Breadth-first search over the joint state space of the non-agent
// variables and the subset's agent variables; other agents stay frozen at
// their initial values and contribute no actions. Returns a shortest plan,
// deterministic under file-order expansion.
SolveResult solve(const MapProblem &problem, const std::vector<int> &subset,
                  const SearchConfig &config);

struct RcVerdict {
    Verdict solvable = Verdict::Indeterminate;
    Verdict rc = Verdict::Indeterminate;
    std::optional<Plan> witness_plan;
    std::vector<std::pair<std::string, Verdict>> per_agent_solvable;
    std::vector<std::string> caps_hit;
};

// Required cooperation: solvable with the full team while no singleton
// subset solves it.
RcVerdict is_rc(const MapProblem &problem, const SearchConfig &config);

struct MinimalKResult {
    Verdict status = Verdict::Indeterminate;  // Yes when k is exact
    int k = 0;
    std::vector<int> subset;  // a witnessing subset of size k
    std::optional<Plan> plan;
};

// Smallest team size that solves the problem, enumerating one subset per
// multiset of agent equivalence classes. Throws UnsolvableProblem when the
// full team cannot solve it.
MinimalKResult minimal_k(const MapProblem &problem,
                         const SearchConfig &config);

// Agents grouped by (action signatures, variable signatures with domains,
// initial agent state up to signature); swapping same-class agents leaves
// the search space isomorphic.
std::vector<std::vector<int>> agent_equivalence_classes(
    const MapProblem &problem);

// Whether some assignment of initial agent states to n clones of the
// representative agent makes the problem solvable. Requires a homogeneous
// team; assignments are enumerated up to clone permutation.
Verdict verify_bound(const MapProblem &problem, int n,
                     const SearchConfig &config);

// The n-clone problem for a chosen assignment; exposed for tests.
MapProblem clone_team_problem(const MapProblem &problem, int n);

}  // namespace coopcheck
