#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coopcheck/causal.hpp"
#include "coopcheck/problem_io.hpp"
#include "coopcheck/report.hpp"

namespace {

int run_analyze(const std::string &path, coopcheck::AnalysisOptions options,
                const std::vector<std::string> &super_init,
                const std::string &dot_path, const std::string &json_path) {
    using namespace coopcheck;
    for (const auto &entry : super_init) {
        auto eq = entry.find('=');
        if (eq == std::string::npos) {
            std::cerr << "--super-init expects VS=value, got '" << entry
                      << "'\n";
            return 2;
        }
        options.super_agent.initial_values[entry.substr(0, eq)] =
            entry.substr(eq + 1);
    }

    MapProblem problem;
    try {
        problem = load_problem(path);
    } catch (const CoopError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }

    try {
        AnalysisReport report = analyze(problem, options);
        std::cout << render_text(report);
        if (!dot_path.empty()) {
            if (report.icgs_built)
                export_dot(build_icgs(problem).graph, problem.name, dot_path);
            else
                export_dot(build_causal_graph(problem), problem.name,
                           dot_path);
        }
        if (!json_path.empty()) {
            std::ofstream out(json_path);
            if (!out)
                throw CoopError(ErrorCode::IoError,
                                "cannot write " + json_path);
            out << report_to_json(report).dump(2) << "\n";
        }
        return report.caps_hit.empty() ? 0 : 3;
    } catch (const CoopError &e) {
        if (e.code() == ErrorCode::IoError) {
            std::cerr << "input error: " << e.what() << "\n";
            return 2;
        }
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

int run_fixtures(const std::string &name, const std::string &out_path) {
    using namespace coopcheck;
    try {
        MapProblem problem = fixture_by_name(name);
        std::string text = serialize_problem(problem);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "input error: cannot write " << out_path << "\n";
                return 2;
            }
            out << text;
        }
        return 0;
    } catch (const CoopError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"required-cooperation analysis for SAS+ multi-agent "
                 "planning problems"};
    app.require_subcommand(1);

    auto *analyze_cmd =
        app.add_subcommand("analyze", "analyze a problem file");
    std::string problem_path;
    analyze_cmd->add_option("problem", problem_path, "problem JSON file")
        ->required();
    coopcheck::AnalysisOptions options;
    analyze_cmd->add_flag("--minimal-k", options.compute_minimal_k,
                          "search for the minimal team size");
    analyze_cmd->add_option("--max-states", options.search.max_states,
                            "joint-state cap for the search oracle");
    analyze_cmd->add_flag("--check-bounds", options.check_bounds,
                          "verify applicable bounds by initial-state search");
    analyze_cmd->add_option("--union-ic-limit", options.union_ic_limit,
                            "also check unions of up to K inner closures");
    std::string dot_path, json_path;
    analyze_cmd->add_option("--dot", dot_path, "write the causal graph/ICGS");
    analyze_cmd->add_option("--json", json_path, "write the JSON report");
    std::vector<std::string> super_init;
    analyze_cmd->add_option("--super-init", super_init,
                            "initial value for an ambiguous super-agent VS "
                            "(VS=value, repeatable)");

    auto *fixtures_cmd =
        app.add_subcommand("fixtures", "emit a built-in fixture problem");
    std::string fixture_name;
    std::string fixture_list;
    for (const auto &name : coopcheck::fixture_names())
        fixture_list += (fixture_list.empty() ? "" : ", ") + name;
    fixtures_cmd
        ->add_option("name", fixture_name, "one of: " + fixture_list)
        ->required();
    std::string fixture_out;
    fixtures_cmd->add_option("--out", fixture_out,
                             "write to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (analyze_cmd->parsed())
        return run_analyze(problem_path, options, super_init, dot_path,
                           json_path);
    return run_fixtures(fixture_name, fixture_out);
}
