#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coopcheck/causal.hpp"
#include "coopcheck/model.hpp"
#include "coopcheck/oracle.hpp"
#include "coopcheck/signatures.hpp"

namespace coopcheck {

struct AnalysisOptions {
    SearchConfig search;
    bool compute_minimal_k = false;
    bool check_bounds = false;  // verify applicable bounds with the oracle
    int union_ic_limit = 1;
    long traversal_cap = kDefaultTraversalCap;
    SuperAgentOptions super_agent;
};

struct LoopInfo {
    std::vector<std::string> nodes;
    bool contains_agent_vs = false;
};

struct IcInfo {
    std::vector<std::string> vars;
    std::vector<std::string> oc;
    std::string traversable;  // verdict name
};

struct BoundInfo {
    std::string status;  // applicability name
    long long value = 0;
    std::vector<std::pair<std::string, bool>> preconditions;
    std::vector<std::string> over;
};

struct PerAgentCausal {
    std::string agent;
    std::string traversable;  // verdict name
    bool has_causal_loops = false;
};

struct AnalysisReport {
    std::string problem;
    Verdict solvable = Verdict::Indeterminate;
    Verdict rc = Verdict::Indeterminate;
    std::string rc_class;  // type-1 | type-2 | not-rc | indeterminate
    HeterogeneityReport heterogeneity;

    bool super_agent_checked = false;
    Verdict super_agent_solvable = Verdict::Indeterminate;
    std::string super_agent_note;

    bool icgs_built = false;
    std::string icgs_note;
    Verdict icgs_traversable = Verdict::Indeterminate;
    std::vector<IcInfo> inner_closures;
    std::vector<LoopInfo> causal_loops;
    bool loops_truncated = false;
    std::optional<std::vector<std::vector<std::string>>> levels;
    std::vector<std::string> cr;
    BoundInfo lemma2;
    BoundInfo lemma3;
    std::optional<std::string> lemma2_verified;  // verdict name, on request
    std::optional<std::string> lemma3_verified;

    std::string theorem1;  // verdict name
    std::vector<std::string> theorem1_reasons;

    // Heterogeneous teams: per-agent causal co-presence of type-2 causes.
    std::vector<PerAgentCausal> per_agent;

    bool minimal_k_requested = false;
    Verdict minimal_k_status = Verdict::Indeterminate;
    std::optional<int> minimal_k;

    // Query label -> plan rendered as [action, agent] pairs.
    std::map<std::string, std::vector<std::pair<std::string, std::string>>>
        witness_plans;

    std::vector<std::string> causes;  // dvc | non-traversable | causal-loop
    std::vector<std::string> caps_hit;
    std::vector<std::string> notes;
};

AnalysisReport analyze(const MapProblem &problem,
                       const AnalysisOptions &options = {});

nlohmann::ordered_json report_to_json(const AnalysisReport &report);
AnalysisReport report_from_json(const nlohmann::json &doc);
std::string render_text(const AnalysisReport &report);

// DOT rendering: directed edges as ->, undirected as --, agent VS nodes
// shape-annotated, goal variables bold. Byte-stable across runs.
std::string to_dot(const CausalGraph &graph, const std::string &name);
void export_dot(const CausalGraph &graph, const std::string &name,
                const std::string &path);

}  // namespace coopcheck
