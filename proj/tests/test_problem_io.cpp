#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "coopcheck/builder.hpp"
#include "coopcheck/oracle.hpp"
#include "coopcheck/problem_io.hpp"
#include "helpers.hpp"

using namespace coopcheck;
using namespace coopcheck::testing;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const CoopError &e) {
        return e.code();
    }
    throw std::runtime_error("expected a CoopError");
}

}  // namespace

TEST_CASE("diamond fixture parses back from its own serialization") {
    MapProblem diamond = fixture_diamond();
    CHECK(diamond.variables.size() == 5);
    CHECK(diamond.agents.size() == 2);
    CHECK(value_at(diamond, diamond.init, "location(agent1)") == "room1");
    CHECK(value_at(diamond, diamond.init, "doorLocked(room1)") == "false");
    CHECK(value_at(diamond, diamond.goal, "location(diamond1)") == "room2");

    MapProblem parsed = parse_problem(serialize_problem(diamond));
    CHECK(serialize_problem(parsed) == serialize_problem(diamond));
    CHECK(parsed.init == diamond.init);
    CHECK(parsed.goal == diamond.goal);
}

TEST_CASE("parse rejects a goal on an agent variable") {
    MapProblem diamond = fixture_diamond();
    std::string text = serialize_problem(diamond);
    auto pos = text.find("\"goal\"");
    REQUIRE(pos != std::string::npos);
    std::string patched = text.substr(0, pos);
    patched += "\"goal\": {\"location(agent1)\": \"room2\"}\n}\n";
    CHECK(code_of([&] { parse_problem(patched); }) ==
          ErrorCode::GoalOnAgentVar);
}

TEST_CASE("parse rejects a single-agent file") {
    std::string text = R"__({
        "agents": ["solo"],
        "variables": [{"name": "x", "domain": ["a", "b"]}],
        "actions": [{"name": "set(solo)", "agent": "solo",
                     "pre": {"x": "a"}, "post": {"x": "b"}}],
        "init": {"x": "a"},
        "goal": {"x": "b"}
    })__";
    CHECK(code_of([&] { parse_problem(text); }) ==
          ErrorCode::NeedsMultipleAgents);
}

TEST_CASE("parse error codes are distinct") {
    auto base = [](const std::string &variables, const std::string &actions,
                   const std::string &init, const std::string &goal) {
        return std::string(
                   R"__({"agents": ["a1", "a2"], "variables": [)__") +
               variables + R"__(], "actions": [)__" + actions +
               R"__(], "init": {)__" + init + R"__(}, "goal": {)__" + goal +
               "}}";
    };
    const std::string var_x = R"__({"name": "x", "domain": ["0", "1"]})__";
    const std::string act =
        R"__({"name": "set(a1)", "agent": "a1", "pre": {"x": "0"},
              "post": {"x": "1"}})__";

    CHECK(code_of([] { parse_problem("{nope"); }) == ErrorCode::SyntaxError);
    CHECK(code_of([&] {
              parse_problem(base(var_x,
                                 R"__({"name": "set(a1)", "agent": "a1",
                                       "post": {"y": "1"}})__",
                                 R"__("x": "0")__", R"__("x": "1")__"));
          }) == ErrorCode::UnknownVariable);
    CHECK(code_of([&] {
              parse_problem(
                  base(var_x, act, R"__("x": "7")__", R"__("x": "1")__"));
          }) == ErrorCode::ValueOutOfDomain);
    CHECK(code_of([&] {
              parse_problem(base(var_x, act, "", R"__("x": "1")__"));
          }) == ErrorCode::InitNotFull);
    // A variable naming two agents is rejected.
    CHECK(code_of([&] {
              parse_problem(base(
                  var_x +
                      R"__(, {"name": "likes(a1,a2)", "domain": ["y"]})__",
                  act, R"__("x": "0", "likes(a1,a2)": "y")__",
                  R"__("x": "1")__"));
          }) == ErrorCode::AgentVarMultiRef);
    // Unpaired pre without the checked-only flag.
    CHECK(code_of([&] {
              parse_problem(base(
                  var_x + R"__(, {"name": "y", "domain": ["0", "1"]})__",
                  R"__({"name": "set(a1)", "agent": "a1",
                        "pre": {"x": "0", "y": "0"}, "post": {"x": "1"}})__",
                  R"__("x": "0", "y": "0")__", R"__("x": "1")__"));
          }) == ErrorCode::PreWithoutPost);
    // The same action is accepted once the pre is flagged checked-only.
    MapProblem checked = parse_problem(base(
        var_x + R"__(, {"name": "y", "domain": ["0", "1"]})__",
        R"__({"name": "set(a1)", "agent": "a1",
              "pre": {"x": "0", "y": "0"}, "post": {"x": "1"},
              "checked_pre": ["y"]})__",
        R"__("x": "0", "y": "0")__", R"__("x": "1")__"));
    CHECK(checked.actions[0].checked_only_pre.size() == 1);
    // Cross-agent conditions are rejected.
    CHECK(code_of([&] {
              parse_problem(base(
                  var_x + R"__(, {"name": "pos(a2)", "domain": ["p"]})__",
                  R"__({"name": "set(a1)", "agent": "a1", "post": {"x": "1"},
                        "prv": {"pos(a2)": "p"}})__",
                  R"__("x": "0", "pos(a2)": "p")__", R"__("x": "1")__"));
          }) == ErrorCode::CrossAgentCondition);
    // EX-AG is reserved, and so is the undefined marker u.
    CHECK(code_of([&] {
              parse_problem(base(
                  var_x + R"__(, {"name": "z", "domain": ["EX-AG"]})__", act,
                  R"__("x": "0", "z": "EX-AG")__", R"__("x": "1")__"));
          }) == ErrorCode::ReservedToken);
    CHECK(code_of([&] {
              parse_problem(base(
                  var_x + R"__(, {"name": "z", "domain": ["u", "v"]})__", act,
                  R"__("x": "0", "z": "v")__", R"__("x": "1")__"));
          }) == ErrorCode::ReservedToken);
}

TEST_CASE("an empty goal is accepted (trivially solvable)") {
    std::string text = R"__({
        "agents": ["a1", "a2"],
        "variables": [{"name": "x", "domain": ["0", "1"]}],
        "actions": [{"name": "set(a1)", "agent": "a1",
                     "pre": {"x": "0"}, "post": {"x": "1"}}],
        "init": {"x": "0"},
        "goal": {}
    })__";
    MapProblem p = parse_problem(text);
    CHECK(p.goal.defined_count() == 0);
}

TEST_CASE("oneway grid fixture matches its construction") {
    MapProblem grid = fixture_oneway_grid();
    CHECK(value_at(grid, grid.init, "connected(a,b)") == "true");
    CHECK(value_at(grid, grid.init, "connected(a,c)") == "true");
    CHECK(value_at(grid, grid.init, "connected(b,a)") == "false");
    CHECK(value_at(grid, grid.init, "connected(c,a)") == "false");

    SearchConfig cfg;
    // Solvable with both trucks.
    std::vector<int> both = {0, 1};
    CHECK(solve(grid, both, cfg).status == SolveStatus::Solved);
    // A single truck strands at b or c.
    CHECK(solve(grid, {0}, cfg).status == SolveStatus::Unsolvable);
    CHECK(solve(grid, {1}, cfg).status == SolveStatus::Unsolvable);
}

TEST_CASE("fixtures are accepted by every analysis entry point") {
    for (const auto &name : fixture_names()) {
        MapProblem p = fixture_by_name(name);
        CHECK_NOTHROW(validate_problem(p));
        CHECK(parse_problem(serialize_problem(p)).init == p.init);
    }
}

TEST_CASE("rc probe is always solvable and mirrors input solvability") {
    // Solvable single-agent input.
    ProblemBuilder solvable_builder("tiny-solvable");
    solvable_builder.agent("solo")
        .variable("x", {"0", "1"})
        .action("flip(solo)", "solo", {{"x", "0"}}, {{"x", "1"}}, {})
        .init({{"x", "0"}})
        .goal({{"x", "1"}});
    MapProblem p_solvable = solvable_builder.build(true);

    MapProblem probe = build_rc_probe(p_solvable);
    CHECK(probe.agents.size() == 2);
    SearchConfig cfg;
    std::vector<int> both = {0, 1};
    CHECK(solve(probe, both, cfg).status == SolveStatus::Solved);
    RcVerdict verdict = is_rc(probe, cfg);
    CHECK(verdict.solvable == Verdict::Yes);
    CHECK(verdict.rc == Verdict::No);

    // Unsolvable single-agent input: the goal value is never produced.
    ProblemBuilder stuck_builder("tiny-stuck");
    stuck_builder.agent("solo")
        .variable("x", {"0", "1", "2"})
        .action("flip(solo)", "solo", {{"x", "0"}}, {{"x", "1"}}, {})
        .init({{"x", "0"}})
        .goal({{"x", "2"}});
    MapProblem p_stuck = stuck_builder.build(true);
    MapProblem stuck_probe = build_rc_probe(p_stuck);
    CHECK(solve(stuck_probe, both, cfg).status == SolveStatus::Solved);
    RcVerdict stuck_verdict = is_rc(stuck_probe, cfg);
    CHECK(stuck_verdict.solvable == Verdict::Yes);
    CHECK(stuck_verdict.rc == Verdict::Yes);
}

TEST_CASE("rc probe needs an initially applicable action") {
    ProblemBuilder b("no-start");
    b.agent("solo")
        .variable("x", {"0", "1"})
        .action("flip(solo)", "solo", {{"x", "1"}}, {{"x", "0"}}, {})
        .init({{"x", "0"}})
        .goal({{"x", "1"}});
    MapProblem p = b.build(true);
    CHECK(code_of([&] { build_rc_probe(p); }) == ErrorCode::GadgetUnbuildable);
}

TEST_CASE("rc probe picks fresh names under collisions") {
    ProblemBuilder b("collide");
    b.agent("solo")
        .variable("__probe_ready", {"0", "1"})
        .action("flip(solo)", "solo", {{"__probe_ready", "0"}},
                {{"__probe_ready", "1"}}, {})
        .init({{"__probe_ready", "0"}})
        .goal({{"__probe_ready", "1"}});
    MapProblem probe = build_rc_probe(b.build(true));
    CHECK(probe.variables.size() == 2);
    CHECK(probe.variables[1].name == "__probe_ready_1");
}

TEST_CASE("random instances are deterministic and round-trip") {
    GeneratorProfile profile;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        MapProblem a = random_instance(seed, profile);
        MapProblem b = random_instance(seed, profile);
        CHECK(serialize_problem(a) == serialize_problem(b));
        MapProblem parsed = parse_problem(serialize_problem(a));
        CHECK(serialize_problem(parsed) == serialize_problem(a));
    }
}

TEST_CASE("generator profiles bound the instance size") {
    GeneratorProfile profile;
    profile.max_agents = 4;
    profile.max_extra_vars = 6;
    profile.max_domain = 4;
    profile.max_schemas = 12;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        MapProblem p = random_instance(seed, profile);
        CHECK(p.agents.size() <= 4);
        std::size_t world = 0;
        for (const auto &var : p.variables) {
            CHECK(var.domain.size() <= 5);  // +1 for a DH mutation
            if (!var.agent_ref)
                ++world;
        }
        CHECK(world <= 6);
    }
    GeneratorProfile bad;
    bad.max_agents = 9;
    CHECK_THROWS_AS(random_instance(1, bad), CoopError);
}
