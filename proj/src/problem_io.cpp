#include "coopcheck/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "coopcheck/builder.hpp"

namespace coopcheck {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string as_string(const json &value, const std::string &context) {
    if (!value.is_string())
        throw CoopError(ErrorCode::SyntaxError, context + " must be a string");
    return value.get<std::string>();
}

Assignments read_assignments(const json &object, const std::string &context) {
    if (!object.is_object())
        throw CoopError(ErrorCode::SyntaxError, context + " must be an object");
    Assignments values;
    for (auto it = object.begin(); it != object.end(); ++it)
        values.emplace_back(it.key(), as_string(it.value(), context));
    return values;
}

}  // namespace

MapProblem parse_problem(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw CoopError(ErrorCode::SyntaxError, e.what());
    }
    try {
        if (!doc.is_object())
            throw CoopError(ErrorCode::SyntaxError,
                            "problem document must be an object");
        ProblemBuilder builder(doc.value("name", ""));

        if (!doc.contains("agents") || !doc["agents"].is_array())
            throw CoopError(ErrorCode::SyntaxError,
                            "'agents' must be an array");
        for (const auto &agent : doc["agents"])
            builder.agent(as_string(agent, "agent id"));

        if (!doc.contains("variables") || !doc["variables"].is_array())
            throw CoopError(ErrorCode::SyntaxError,
                            "'variables' must be an array");
        for (const auto &var : doc["variables"]) {
            if (!var.is_object() || !var.contains("name") ||
                !var.contains("domain") || !var["domain"].is_array())
                throw CoopError(ErrorCode::SyntaxError,
                                "each variable needs 'name' and 'domain'");
            std::vector<std::string> domain;
            for (const auto &value : var["domain"])
                domain.push_back(as_string(value, "domain value"));
            std::optional<std::string> agent;
            if (var.contains("agent"))
                agent = as_string(var["agent"], "variable agent");
            builder.variable(as_string(var["name"], "variable name"),
                             std::move(domain), std::move(agent));
        }

        if (!doc.contains("actions") || !doc["actions"].is_array())
            throw CoopError(ErrorCode::SyntaxError,
                            "'actions' must be an array");
        for (const auto &action : doc["actions"]) {
            if (!action.is_object() || !action.contains("name") ||
                !action.contains("agent"))
                throw CoopError(ErrorCode::SyntaxError,
                                "each action needs 'name' and 'agent'");
            std::string name = as_string(action["name"], "action name");
            Assignments pre, post, prv;
            if (action.contains("pre"))
                pre = read_assignments(action["pre"], name + " pre");
            if (action.contains("post"))
                post = read_assignments(action["post"], name + " post");
            if (action.contains("prv"))
                prv = read_assignments(action["prv"], name + " prv");
            std::vector<std::string> checked_pre;
            if (action.contains("checked_pre")) {
                if (!action["checked_pre"].is_array())
                    throw CoopError(ErrorCode::SyntaxError,
                                    name + " checked_pre must be an array");
                for (const auto &entry : action["checked_pre"])
                    checked_pre.push_back(as_string(entry, "checked_pre"));
            }
            builder.action(name, as_string(action["agent"], "action agent"),
                           pre, post, prv, checked_pre);
        }

        if (!doc.contains("init"))
            throw CoopError(ErrorCode::SyntaxError, "'init' is required");
        builder.init(read_assignments(doc["init"], "init"));
        if (!doc.contains("goal"))
            throw CoopError(ErrorCode::SyntaxError, "'goal' is required");
        builder.goal(read_assignments(doc["goal"], "goal"));

        return builder.build();
    } catch (const json::exception &e) {
        throw CoopError(ErrorCode::SyntaxError, e.what());
    }
}

MapProblem load_problem(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw CoopError(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem(buffer.str());
}

std::string serialize_problem(const MapProblem &problem) {
    ordered_json doc;
    if (!problem.name.empty())
        doc["name"] = problem.name;
    doc["agents"] = ordered_json::array();
    for (const auto &agent : problem.agents)
        doc["agents"].push_back(agent.id);

    doc["variables"] = ordered_json::array();
    for (const auto &var : problem.variables) {
        ordered_json entry;
        entry["name"] = var.name;
        entry["domain"] = var.domain;
        if (var.agent_ref)
            entry["agent"] = *var.agent_ref;
        doc["variables"].push_back(std::move(entry));
    }

    auto emit_state = [&](const PartialState &s) {
        ordered_json object = ordered_json::object();
        for (std::size_t v = 0; v < s.size(); ++v)
            if (s.defined(v))
                object[problem.variables[v].name] =
                    problem.variables[v]
                        .domain[static_cast<std::size_t>(s[v])];
        return object;
    };

    doc["actions"] = ordered_json::array();
    for (const auto &action : problem.actions) {
        ordered_json entry;
        entry["name"] = action.name;
        entry["agent"] = action.owner;
        if (action.pre.defined_count() > 0)
            entry["pre"] = emit_state(action.pre);
        entry["post"] = emit_state(action.post);
        if (action.prv.defined_count() > 0)
            entry["prv"] = emit_state(action.prv);
        if (!action.checked_only_pre.empty()) {
            ordered_json checked = ordered_json::array();
            for (int v : action.checked_only_pre)
                checked.push_back(
                    problem.variables[static_cast<std::size_t>(v)].name);
            entry["checked_pre"] = std::move(checked);
        }
        doc["actions"].push_back(std::move(entry));
    }

    doc["init"] = emit_state(problem.init);
    doc["goal"] = emit_state(problem.goal);
    return doc.dump(2) + "\n";
}

void save_problem(const MapProblem &problem, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw CoopError(ErrorCode::IoError, "cannot write " + path);
    out << serialize_problem(problem);
}

}  // namespace coopcheck
