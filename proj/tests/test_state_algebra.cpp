#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "coopcheck/model.hpp"
#include "coopcheck/problem_io.hpp"
#include "helpers.hpp"

using namespace coopcheck;
using namespace coopcheck::testing;

namespace {

PartialState make(std::initializer_list<int> values) {
    PartialState s(values.size());
    std::size_t i = 0;
    for (int v : values)
        s.set(i++, v);
    return s;
}

}  // namespace

TEST_CASE("update keeps values where the right side is undefined") {
    CHECK(update(make({0}), make({kUndefined})) == make({0}));
    CHECK(update(make({0, kUndefined}), make({1, kUndefined})) ==
          make({1, kUndefined}));
    CHECK(update(make({kUndefined}), make({2})) == make({2}));
}

TEST_CASE("update rejects mismatched variable sets") {
    CHECK_THROWS_AS(update(make({0}), make({0, 1})), CoopError);
}

TEST_CASE("diamond init updated by post(Steal)") {
    MapProblem diamond = fixture_diamond();
    const Action &steal = diamond.actions[static_cast<std::size_t>(
        action_index(diamond, "Steal(agent1,diamond1,room1,door1)"))];
    PartialState result = update(diamond.init, steal.post);
    CHECK(value_at(diamond, result, "doorLocked(room1)") == "true");
    CHECK(value_at(diamond, result, "location(diamond1)") == "agent1");
    CHECK(value_at(diamond, result, "location(agent1)") == "room1");
    CHECK(value_at(diamond, result, "location(agent2)") == "room1");
    CHECK(value_at(diamond, result, "location(switch1)") == "room2");
}

TEST_CASE("join picks the defined side and rejects conflicts") {
    CHECK(join(make({0, kUndefined}), make({kUndefined, 1})) == make({0, 1}));
    CHECK(join(make({kUndefined}), make({kUndefined})) == make({kUndefined}));
    try {
        join(make({0, 1}), make({kUndefined, 1}));
        FAIL("expected a conflict");
    } catch (const CoopError &e) {
        CHECK(e.code() == ErrorCode::JoinConflict);
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}

TEST_CASE("pre(Steal) joined with prv(Steal)") {
    MapProblem diamond = fixture_diamond();
    const Action &steal = diamond.actions[static_cast<std::size_t>(
        action_index(diamond, "Steal(agent1,diamond1,room1,door1)"))];
    PartialState joined = join(steal.pre, steal.prv);
    CHECK(value_at(diamond, joined, "doorLocked(room1)") == "u");
    CHECK(value_at(diamond, joined, "location(diamond1)") == "room1");
    CHECK(value_at(diamond, joined, "location(agent1)") == "room1");
    CHECK(value_at(diamond, joined, "location(agent2)") == "u");
    CHECK(value_at(diamond, joined, "location(switch1)") == "u");
}

TEST_CASE("subsumes basics") {
    CHECK(subsumes(make({kUndefined, kUndefined}), make({0, 1})));
    CHECK_FALSE(subsumes(make({0}), make({1})));
    CHECK(subsumes(make({0}), make({0})));
}

TEST_CASE("goal subsumed by the final state of the witness plan") {
    MapProblem diamond = fixture_diamond();
    Plan witness = make_plan(
        diamond, {"WalkThrough(agent2,door1,room1,room2)",
                  "Steal(agent1,diamond1,room1,door1)",
                  "Switch(agent2,switch1,room2,door1)",
                  "WalkThrough(agent1,door1,room1,room2)",
                  "Place(agent1,diamond1,room2)"});
    ExecutionResult result = execute(diamond, diamond.init, witness);
    CHECK(result.skipped.empty());
    CHECK(subsumes(diamond.goal, result.final_state));
}

TEST_CASE("execute with an empty plan returns the state") {
    MapProblem diamond = fixture_diamond();
    ExecutionResult result = execute(diamond, diamond.init, Plan{});
    CHECK(result.final_state == diamond.init);
    CHECK(result.skipped.empty());
}

TEST_CASE("execute applies Steal to the diamond init") {
    MapProblem diamond = fixture_diamond();
    Plan plan = make_plan(diamond, {"Steal(agent1,diamond1,room1,door1)"});
    ExecutionResult result = execute(diamond, diamond.init, plan);
    CHECK(result.skipped.empty());
    CHECK(value_at(diamond, result.final_state, "doorLocked(room1)") ==
          "true");
    CHECK(value_at(diamond, result.final_state, "location(diamond1)") ==
          "agent1");
}

TEST_CASE("execute skips an inapplicable step and leaves the state alone") {
    MapProblem diamond = fixture_diamond();
    Plan plan = make_plan(diamond, {"WalkThrough(agent1,door1,room1,room2)",
                                    "Steal(agent1,diamond1,room1,door1)"});
    ExecutionResult result = execute(diamond, diamond.init, plan);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped.front() == 1);  // Steal: prv location(agent1) fails
    CHECK(value_at(diamond, result.final_state, "location(agent1)") ==
          "room2");
    CHECK(value_at(diamond, result.final_state, "location(diamond1)") ==
          "room1");
    CHECK(value_at(diamond, result.final_state, "doorLocked(room1)") ==
          "false");
}

TEST_CASE("execute rejects unknown steps and non-owners") {
    MapProblem diamond = fixture_diamond();
    Plan bad_action;
    bad_action.steps.push_back({999, 0});
    CHECK_THROWS_AS(execute(diamond, diamond.init, bad_action), CoopError);
    Plan bad_owner;
    bad_owner.steps.push_back(
        {action_index(diamond, "Steal(agent1,diamond1,room1,door1)"), 1});
    CHECK_THROWS_AS(execute(diamond, diamond.init, bad_owner), CoopError);
}

TEST_CASE("execute requires a fully defined start state") {
    MapProblem diamond = fixture_diamond();
    PartialState partial(diamond.variables.size());
    CHECK_THROWS_AS(execute(diamond, partial, Plan{}), CoopError);
}

TEST_CASE("validate_plan accepts the two-agent witness") {
    MapProblem diamond = fixture_diamond();
    Plan witness = make_plan(
        diamond, {"WalkThrough(agent2,door1,room1,room2)",
                  "Steal(agent1,diamond1,room1,door1)",
                  "Switch(agent2,switch1,room2,door1)",
                  "WalkThrough(agent1,door1,room1,room2)",
                  "Place(agent1,diamond1,room2)"});
    ValidationResult result = validate_plan(diamond, witness);
    CHECK(result.valid);
    CHECK(subsumes(diamond.goal, result.final_state));
}

TEST_CASE("validate_plan rejects the empty plan on the diamond") {
    MapProblem diamond = fixture_diamond();
    ValidationResult result = validate_plan(diamond, Plan{});
    CHECK_FALSE(result.valid);
    CHECK_FALSE(result.failing_step.has_value());
    CHECK(result.violation.find("location(diamond1)") != std::string::npos);
}

TEST_CASE("validate_plan pinpoints the locked-door WalkThrough") {
    MapProblem diamond = fixture_diamond();
    Plan plan = make_plan(diamond, {"Steal(agent1,diamond1,room1,door1)",
                                    "WalkThrough(agent1,door1,room1,room2)"});
    ValidationResult result = validate_plan(diamond, plan);
    CHECK_FALSE(result.valid);
    REQUIRE(result.failing_step.has_value());
    CHECK(*result.failing_step == 1);
    CHECK(result.violation.find("doorLocked(room1)") != std::string::npos);
}

TEST_CASE("update properties: right absorption and identity") {
    MapProblem diamond = fixture_diamond();
    std::mt19937_64 rng(20240811);
    PartialState all_u(diamond.variables.size());
    for (int round = 0; round < 200; ++round) {
        PartialState s1 = random_state(diamond, rng);
        PartialState s2 = random_state(diamond, rng);
        CHECK(update(update(s1, s2), s2) == update(s1, s2));
        CHECK(update(s1, all_u) == s1);
        // all-u updated by s agrees with s on defined positions.
        PartialState lifted = update(all_u, s1);
        for (std::size_t v = 0; v < s1.size(); ++v)
            if (s1.defined(v))
                CHECK(lifted[v] == s1[v]);
    }
}

TEST_CASE("subsumption is reflexive and transitive; all-u is a minimum") {
    MapProblem diamond = fixture_diamond();
    std::mt19937_64 rng(7);
    PartialState all_u(diamond.variables.size());
    for (int round = 0; round < 300; ++round) {
        PartialState a = random_state(diamond, rng);
        PartialState b = random_state(diamond, rng);
        PartialState c = random_state(diamond, rng);
        CHECK(subsumes(a, a));
        CHECK(subsumes(all_u, a));
        if (subsumes(a, b) && subsumes(b, c))
            CHECK(subsumes(a, c));
    }
}

TEST_CASE("execute prefix property and post-only overwrites") {
    MapProblem diamond = fixture_diamond();
    std::mt19937_64 rng(99);
    for (int round = 0; round < 200; ++round) {
        Plan first = random_plan(diamond, rng, rng() % 5);
        Plan second = random_plan(diamond, rng, rng() % 5);
        Plan combined;
        combined.steps = first.steps;
        combined.steps.insert(combined.steps.end(), second.steps.begin(),
                              second.steps.end());
        PartialState mid = execute(diamond, diamond.init, first).final_state;
        PartialState split = execute(diamond, mid, second).final_state;
        PartialState whole =
            execute(diamond, diamond.init, combined).final_state;
        CHECK(split == whole);
        CHECK(whole.fully_defined());
    }
}
