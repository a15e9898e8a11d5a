#include "coopcheck/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace coopcheck {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::pair<std::string, std::string>> plan_pairs(
    const MapProblem &problem, const Plan &plan) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto &step : plan.steps)
        out.emplace_back(
            problem.actions[static_cast<std::size_t>(step.action)].name,
            problem.agents[static_cast<std::size_t>(step.agent)].id);
    return out;
}

std::vector<std::string> node_labels(const CausalGraph &graph,
                                     const std::vector<int> &nodes) {
    std::vector<std::string> labels;
    for (int v : nodes)
        labels.push_back(graph.nodes[static_cast<std::size_t>(v)].label);
    return labels;
}

BoundInfo bound_info(const BoundResult &result) {
    BoundInfo info;
    info.status = applicability_name(result.status);
    info.value = result.value;
    info.preconditions = result.preconditions;
    info.over = result.over;
    return info;
}

void flag_cause(AnalysisReport &report, const std::string &cause) {
    if (std::find(report.causes.begin(), report.causes.end(), cause) ==
        report.causes.end())
        report.causes.push_back(cause);
}

}  // namespace

AnalysisReport analyze(const MapProblem &problem,
                       const AnalysisOptions &options) {
    AnalysisReport report;
    report.problem = problem.name;

    // Solvability and the RC decision.
    RcVerdict rc = is_rc(problem, options.search);
    report.solvable = rc.solvable;
    report.rc = rc.rc;
    report.caps_hit = rc.caps_hit;
    if (rc.witness_plan)
        report.witness_plans["team"] = plan_pairs(problem, *rc.witness_plan);

    // Heterogeneity and classification.
    report.heterogeneity = check_dvc(problem);
    const bool dvc = report.heterogeneity.dvc;
    if (report.rc == Verdict::Indeterminate)
        report.rc_class = "indeterminate";
    else if (report.rc == Verdict::No)
        report.rc_class = "not-rc";
    else
        report.rc_class = dvc ? "type-1" : "type-2";
    if (dvc)
        flag_cause(report, "dvc");
    if (!report.heterogeneity.single_valued.empty())
        report.notes.push_back(
            "single-valued agent variables (initial-state-like commitments): " +
            std::to_string(report.heterogeneity.single_valued.size()));

    // Super-agent check for heterogeneous RC problems.
    if (report.rc_class == "type-1") {
        report.super_agent_checked = true;
        try {
            SuperAgentCheck check = is_super_agent_solvable(
                problem, options.search, options.super_agent);
            report.super_agent_solvable = check.solvable;
            if (check.solvable == Verdict::Indeterminate) {
                report.super_agent_note = check.note;
                report.caps_hit.push_back("super-agent solve: " + check.note);
            }
            if (check.plan)
                report.witness_plans["super_agent"] =
                    plan_pairs(check.super_problem, *check.plan);
        } catch (const CoopError &e) {
            report.super_agent_solvable = Verdict::Indeterminate;
            report.super_agent_note = e.what();
        }
    }

    // Causal analyses. Homogeneous teams get the ICGS machinery; otherwise
    // each agent's own causal graph reports co-present type-2 conditions.
    if (!dvc && problem.agents.size() > 1) {
        report.icgs_built = true;
        report.notes.push_back(
            "ICGS domains map agent-name values to EX-AG (interpretation)");
        Icgs icgs = build_icgs(problem);
        const auto closures = inner_closures(icgs.graph);
        bool any_no = false;
        bool any_cap = false;
        for (const auto &ic : closures) {
            IcInfo info;
            info.vars = node_labels(icgs.graph, ic.vars);
            info.oc = node_labels(icgs.graph, ic.oc);
            Verdict v = is_traversable(icgs.graph, ic, options.traversal_cap);
            info.traversable = verdict_name(v);
            any_no = any_no || v == Verdict::No;
            any_cap = any_cap || v == Verdict::Indeterminate;
            report.inner_closures.push_back(std::move(info));
        }
        Verdict traversable =
            any_no ? Verdict::No
                   : (any_cap ? Verdict::Indeterminate : Verdict::Yes);
        if (traversable == Verdict::Yes && options.union_ic_limit > 1)
            traversable = graph_traversable(icgs.graph, options.traversal_cap,
                                            options.union_ic_limit);
        report.icgs_traversable = traversable;
        if (traversable == Verdict::No)
            flag_cause(report, "non-traversable");
        if (traversable == Verdict::Indeterminate)
            report.caps_hit.push_back("traversability check capped");

        LoopReport loops = find_causal_loops(icgs.graph);
        report.loops_truncated = loops.truncated;
        for (const auto &loop : loops.loops) {
            LoopInfo info;
            info.nodes = node_labels(icgs.graph, loop.nodes);
            info.contains_agent_vs = loop.contains_agent_vs;
            report.causal_loops.push_back(std::move(info));
        }
        if (!loops.loops.empty())
            flag_cause(report, "causal-loop");
        if (loops.loops.empty() && !loops.truncated) {
            std::vector<std::vector<std::string>> levels;
            for (const auto &level : level_decomposition(icgs.graph))
                levels.push_back(node_labels(icgs.graph, level));
            report.levels = std::move(levels);
        }

        report.cr = node_labels(icgs.graph, compute_cr(icgs));
        report.lemma2 = bound_info(bound_lemma2(icgs, options.traversal_cap));
        report.lemma3 =
            bound_info(bound_lemma3(icgs, report.solvable));

        if (options.check_bounds) {
            auto verify = [&](const BoundInfo &info) -> std::optional<std::string> {
                if (info.status != "applicable")
                    return std::nullopt;
                Verdict v = verify_bound(problem,
                                         static_cast<int>(info.value),
                                         options.search);
                return std::string(verdict_name(v));
            };
            report.lemma2_verified = verify(report.lemma2);
            report.lemma3_verified = verify(report.lemma3);
        }
    } else if (dvc) {
        report.icgs_note = "team is heterogeneous; ICGS not built";
        bool all_non_traversable = true;
        bool all_loops = true;
        for (std::size_t g = 0; g < problem.agents.size(); ++g) {
            CausalGraph graph =
                build_agent_causal_graph(problem, static_cast<int>(g));
            PerAgentCausal entry;
            entry.agent = problem.agents[g].id;
            Verdict v = graph_traversable(graph, options.traversal_cap);
            entry.traversable = verdict_name(v);
            if (v == Verdict::Indeterminate)
                report.caps_hit.push_back("per-agent traversability capped: " +
                                          entry.agent);
            LoopReport loops = find_causal_loops(graph);
            entry.has_causal_loops = !loops.loops.empty();
            all_non_traversable = all_non_traversable && v == Verdict::No;
            all_loops = all_loops && entry.has_causal_loops;
            report.per_agent.push_back(std::move(entry));
        }
        // Co-presence of type-2 conditions, reported without claiming which
        // cause is operative.
        if (all_non_traversable)
            flag_cause(report, "non-traversable");
        if (all_loops)
            flag_cause(report, "causal-loop");
    }

    // The single-agent certificate.
    Theorem1Result theorem = theorem1_certificate(problem,
                                                  options.traversal_cap);
    report.theorem1 = verdict_name(theorem.granted);
    report.theorem1_reasons = theorem.reasons;

    if (options.compute_minimal_k) {
        report.minimal_k_requested = true;
        if (report.solvable == Verdict::No) {
            report.minimal_k_status = Verdict::No;
            report.notes.push_back("minimal_k undefined: problem unsolvable");
        } else {
            MinimalKResult k = minimal_k(problem, options.search);
            report.minimal_k_status = k.status;
            if (k.status != Verdict::Indeterminate || k.k > 0)
                report.minimal_k = k.k;
            else
                report.caps_hit.push_back("minimal_k capped");
            if (k.plan)
                report.witness_plans["minimal_k"] =
                    plan_pairs(problem, *k.plan);
        }
    }

    // Singleton witnesses for non-RC problems.
    if (report.rc == Verdict::No && report.solvable == Verdict::Yes)
        for (const auto &[agent, verdict] : rc.per_agent_solvable)
            if (verdict == Verdict::Yes) {
                int g = problem.agent_index(agent);
                SolveResult single = solve(problem, {g}, options.search);
                if (single.status == SolveStatus::Solved)
                    report.witness_plans["agent:" + agent] =
                        plan_pairs(problem, single.plan);
                break;
            }

    return report;
}

// ---- JSON ------------------------------------------------------------------

namespace {

ordered_json heterogeneity_to_json(const HeterogeneityReport &report) {
    ordered_json doc;
    doc["dvc"] = report.dvc;
    doc["agents"] = ordered_json::array();
    for (std::size_t g = 0; g < report.agents.size(); ++g) {
        ordered_json entry;
        entry["agent"] = report.agents[g];
        entry["dh"] = report.dh_witnesses[g];
        entry["vh"] = report.vh_witnesses[g];
        entry["ch"] = report.ch_witnesses[g];
        doc["agents"].push_back(std::move(entry));
    }
    doc["single_valued"] = report.single_valued;
    return doc;
}

HeterogeneityReport heterogeneity_from_json(const json &doc) {
    HeterogeneityReport report;
    report.dvc = doc.at("dvc").get<bool>();
    for (const auto &entry : doc.at("agents")) {
        report.agents.push_back(entry.at("agent").get<std::string>());
        report.dh_witnesses.push_back(
            entry.at("dh").get<std::vector<std::string>>());
        report.vh_witnesses.push_back(
            entry.at("vh").get<std::vector<std::string>>());
        report.ch_witnesses.push_back(
            entry.at("ch").get<std::vector<std::string>>());
    }
    report.single_valued =
        doc.at("single_valued").get<std::vector<std::string>>();
    return report;
}

ordered_json bound_to_json(const BoundInfo &info) {
    ordered_json doc;
    doc["status"] = info.status;
    doc["value"] = info.value;
    doc["preconditions"] = ordered_json::object();
    auto sorted = info.preconditions;
    std::sort(sorted.begin(), sorted.end());
    for (const auto &[name, holds] : sorted)
        doc["preconditions"][name] = holds;
    doc["over"] = info.over;
    return doc;
}

BoundInfo bound_from_json(const json &doc) {
    BoundInfo info;
    info.status = doc.at("status").get<std::string>();
    info.value = doc.at("value").get<long long>();
    for (auto it = doc.at("preconditions").begin();
         it != doc.at("preconditions").end(); ++it)
        info.preconditions.emplace_back(it.key(), it.value().get<bool>());
    std::sort(info.preconditions.begin(), info.preconditions.end());
    info.over = doc.at("over").get<std::vector<std::string>>();
    return info;
}

}  // namespace

nlohmann::ordered_json report_to_json(const AnalysisReport &report) {
    ordered_json doc;
    doc["problem"] = report.problem;
    doc["solvable"] = verdict_name(report.solvable);
    doc["rc"] = verdict_name(report.rc);
    doc["rc_class"] = report.rc_class;
    doc["heterogeneity"] = heterogeneity_to_json(report.heterogeneity);

    ordered_json super;
    super["checked"] = report.super_agent_checked;
    super["solvable"] = verdict_name(report.super_agent_solvable);
    super["note"] = report.super_agent_note;
    doc["super_agent"] = std::move(super);

    ordered_json icgs;
    icgs["built"] = report.icgs_built;
    icgs["note"] = report.icgs_note;
    icgs["traversable"] = verdict_name(report.icgs_traversable);
    icgs["inner_closures"] = ordered_json::array();
    for (const auto &ic : report.inner_closures) {
        ordered_json entry;
        entry["vars"] = ic.vars;
        entry["oc"] = ic.oc;
        entry["traversable"] = ic.traversable;
        icgs["inner_closures"].push_back(std::move(entry));
    }
    icgs["causal_loops"] = ordered_json::array();
    for (const auto &loop : report.causal_loops) {
        ordered_json entry;
        entry["nodes"] = loop.nodes;
        entry["contains_agent_vs"] = loop.contains_agent_vs;
        icgs["causal_loops"].push_back(std::move(entry));
    }
    icgs["loops_truncated"] = report.loops_truncated;
    if (report.levels)
        icgs["levels"] = *report.levels;
    else
        icgs["levels"] = nullptr;
    icgs["cr"] = report.cr;
    doc["icgs"] = std::move(icgs);

    ordered_json bounds;
    bounds["lemma2"] = bound_to_json(report.lemma2);
    bounds["lemma3"] = bound_to_json(report.lemma3);
    if (report.lemma2_verified)
        bounds["lemma2_verified"] = *report.lemma2_verified;
    if (report.lemma3_verified)
        bounds["lemma3_verified"] = *report.lemma3_verified;
    doc["bounds"] = std::move(bounds);

    ordered_json theorem;
    theorem["granted"] = report.theorem1;
    theorem["reasons"] = report.theorem1_reasons;
    doc["theorem1"] = std::move(theorem);

    doc["per_agent_causal"] = ordered_json::array();
    for (const auto &entry : report.per_agent) {
        ordered_json item;
        item["agent"] = entry.agent;
        item["traversable"] = entry.traversable;
        item["has_causal_loops"] = entry.has_causal_loops;
        doc["per_agent_causal"].push_back(std::move(item));
    }

    ordered_json minimal;
    minimal["requested"] = report.minimal_k_requested;
    minimal["status"] = verdict_name(report.minimal_k_status);
    if (report.minimal_k)
        minimal["k"] = *report.minimal_k;
    else
        minimal["k"] = nullptr;
    doc["minimal_k"] = std::move(minimal);

    ordered_json plans = ordered_json::object();
    for (const auto &[label, steps] : report.witness_plans) {
        ordered_json list = ordered_json::array();
        for (const auto &[action, agent] : steps)
            list.push_back(ordered_json::array({action, agent}));
        plans[label] = std::move(list);
    }
    doc["witness_plans"] = std::move(plans);

    doc["causes"] = report.causes;
    doc["caps_hit"] = report.caps_hit;
    doc["notes"] = report.notes;
    return doc;
}

AnalysisReport report_from_json(const json &doc) {
    AnalysisReport report;
    report.problem = doc.at("problem").get<std::string>();
    report.solvable = verdict_from_name(doc.at("solvable").get<std::string>());
    report.rc = verdict_from_name(doc.at("rc").get<std::string>());
    report.rc_class = doc.at("rc_class").get<std::string>();
    report.heterogeneity = heterogeneity_from_json(doc.at("heterogeneity"));

    const auto &super = doc.at("super_agent");
    report.super_agent_checked = super.at("checked").get<bool>();
    report.super_agent_solvable =
        verdict_from_name(super.at("solvable").get<std::string>());
    report.super_agent_note = super.at("note").get<std::string>();

    const auto &icgs = doc.at("icgs");
    report.icgs_built = icgs.at("built").get<bool>();
    report.icgs_note = icgs.at("note").get<std::string>();
    report.icgs_traversable =
        verdict_from_name(icgs.at("traversable").get<std::string>());
    for (const auto &entry : icgs.at("inner_closures")) {
        IcInfo ic;
        ic.vars = entry.at("vars").get<std::vector<std::string>>();
        ic.oc = entry.at("oc").get<std::vector<std::string>>();
        ic.traversable = entry.at("traversable").get<std::string>();
        report.inner_closures.push_back(std::move(ic));
    }
    for (const auto &entry : icgs.at("causal_loops")) {
        LoopInfo loop;
        loop.nodes = entry.at("nodes").get<std::vector<std::string>>();
        loop.contains_agent_vs = entry.at("contains_agent_vs").get<bool>();
        report.causal_loops.push_back(std::move(loop));
    }
    report.loops_truncated = icgs.at("loops_truncated").get<bool>();
    if (!icgs.at("levels").is_null())
        report.levels =
            icgs.at("levels").get<std::vector<std::vector<std::string>>>();
    report.cr = icgs.at("cr").get<std::vector<std::string>>();

    const auto &bounds = doc.at("bounds");
    report.lemma2 = bound_from_json(bounds.at("lemma2"));
    report.lemma3 = bound_from_json(bounds.at("lemma3"));
    if (bounds.contains("lemma2_verified"))
        report.lemma2_verified =
            bounds.at("lemma2_verified").get<std::string>();
    if (bounds.contains("lemma3_verified"))
        report.lemma3_verified =
            bounds.at("lemma3_verified").get<std::string>();

    report.theorem1 = doc.at("theorem1").at("granted").get<std::string>();
    report.theorem1_reasons =
        doc.at("theorem1").at("reasons").get<std::vector<std::string>>();

    for (const auto &entry : doc.at("per_agent_causal")) {
        PerAgentCausal item;
        item.agent = entry.at("agent").get<std::string>();
        item.traversable = entry.at("traversable").get<std::string>();
        item.has_causal_loops = entry.at("has_causal_loops").get<bool>();
        report.per_agent.push_back(std::move(item));
    }

    const auto &minimal = doc.at("minimal_k");
    report.minimal_k_requested = minimal.at("requested").get<bool>();
    report.minimal_k_status =
        verdict_from_name(minimal.at("status").get<std::string>());
    if (!minimal.at("k").is_null())
        report.minimal_k = minimal.at("k").get<int>();

    for (auto it = doc.at("witness_plans").begin();
         it != doc.at("witness_plans").end(); ++it) {
        std::vector<std::pair<std::string, std::string>> steps;
        for (const auto &pair : it.value())
            steps.emplace_back(pair.at(0).get<std::string>(),
                               pair.at(1).get<std::string>());
        report.witness_plans[it.key()] = std::move(steps);
    }

    report.causes = doc.at("causes").get<std::vector<std::string>>();
    report.caps_hit = doc.at("caps_hit").get<std::vector<std::string>>();
    report.notes = doc.at("notes").get<std::vector<std::string>>();
    return report;
}

// ---- text ------------------------------------------------------------------

std::string render_text(const AnalysisReport &report) {
    std::ostringstream out;
    out << "problem: " << report.problem << "\n";
    out << "solvable: " << verdict_name(report.solvable)
        << "  rc: " << verdict_name(report.rc) << "  class: " << report.rc_class
        << "\n";
    out << "dvc: " << (report.heterogeneity.dvc ? "true" : "false");
    if (report.heterogeneity.dvc) {
        out << "  (";
        bool first = true;
        for (std::size_t g = 0; g < report.heterogeneity.agents.size(); ++g) {
            auto count = [&](const std::vector<std::vector<std::string>> &w) {
                return w[g].size();
            };
            std::size_t total = count(report.heterogeneity.dh_witnesses) +
                                count(report.heterogeneity.vh_witnesses) +
                                count(report.heterogeneity.ch_witnesses);
            if (total == 0)
                continue;
            if (!first)
                out << ", ";
            first = false;
            out << report.heterogeneity.agents[g] << ": "
                << count(report.heterogeneity.dh_witnesses) << " dh / "
                << count(report.heterogeneity.vh_witnesses) << " vh / "
                << count(report.heterogeneity.ch_witnesses) << " ch";
        }
        out << ")";
    }
    out << "\n";
    if (report.super_agent_checked)
        out << "super-agent solvable: "
            << verdict_name(report.super_agent_solvable) << "\n";
    if (report.icgs_built) {
        out << "icgs: traversable " << verdict_name(report.icgs_traversable)
            << ", " << report.causal_loops.size() << " causal loop(s)"
            << (report.loops_truncated ? " (truncated)" : "") << "\n";
        for (const auto &ic : report.inner_closures) {
            out << "  ic {";
            for (std::size_t i = 0; i < ic.vars.size(); ++i)
                out << (i ? ", " : "") << ic.vars[i];
            out << "}: " << ic.traversable << "\n";
        }
        out << "bounds: lemma2 " << report.lemma2.status;
        if (report.lemma2.status == "applicable")
            out << " = " << report.lemma2.value;
        out << ", lemma3 " << report.lemma3.status;
        if (report.lemma3.status == "applicable")
            out << " = " << report.lemma3.value;
        out << "\n";
    } else if (!report.per_agent.empty()) {
        for (const auto &entry : report.per_agent)
            out << "  agent " << entry.agent << ": traversable "
                << entry.traversable << ", loops "
                << (entry.has_causal_loops ? "yes" : "no") << "\n";
    }
    out << "theorem1 certificate: " << report.theorem1;
    for (const auto &reason : report.theorem1_reasons)
        out << "; " << reason;
    out << "\n";
    if (report.minimal_k_requested) {
        out << "minimal k: ";
        if (report.minimal_k)
            out << *report.minimal_k
                << (report.minimal_k_status == Verdict::Indeterminate
                        ? " (upper bound; caps below)"
                        : "");
        else
            out << verdict_name(report.minimal_k_status);
        out << "\n";
    }
    out << "causes: ";
    if (report.causes.empty())
        out << "none";
    for (std::size_t i = 0; i < report.causes.size(); ++i)
        out << (i ? ", " : "") << report.causes[i];
    out << "\n";
    if (!report.caps_hit.empty()) {
        out << "caps hit:\n";
        for (const auto &cap : report.caps_hit)
            out << "  " << cap << "\n";
    }
    return out.str();
}

// ---- DOT -------------------------------------------------------------------

std::string to_dot(const CausalGraph &graph, const std::string &name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    out << "  rankdir=LR;\n";
    for (const auto &node : graph.nodes) {
        out << "  \"" << node.label << "\" [shape="
            << (node.agent_vs ? "doublecircle" : "ellipse");
        if (node.in_goal)
            out << ", penwidth=3";
        out << "];\n";
    }
    auto label_of = [](const std::vector<std::string> &actions) {
        // Operator names without parameters, first-contribution order.
        std::vector<std::string> heads;
        for (const auto &action : actions) {
            std::string head = action.substr(0, action.find('('));
            if (std::find(heads.begin(), heads.end(), head) == heads.end())
                heads.push_back(head);
        }
        std::string label;
        for (std::size_t i = 0; i < heads.size(); ++i)
            label += (i ? "," : "") + heads[i];
        return label;
    };
    for (const auto &edge : graph.directed)
        out << "  \"" << graph.nodes[static_cast<std::size_t>(edge.from)].label
            << "\" -> \""
            << graph.nodes[static_cast<std::size_t>(edge.to)].label
            << "\" [label=\"" << label_of(edge.actions) << "\"];\n";
    for (const auto &edge : graph.undirected)
        out << "  \"" << graph.nodes[static_cast<std::size_t>(edge.a)].label
            << "\" -- \""
            << graph.nodes[static_cast<std::size_t>(edge.b)].label
            << "\" [label=\"" << label_of(edge.actions) << "\"];\n";
    out << "}\n";
    return out.str();
}

void export_dot(const CausalGraph &graph, const std::string &name,
                const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw CoopError(ErrorCode::IoError, "cannot write " + path);
    out << to_dot(graph, name);
}

}  // namespace coopcheck
