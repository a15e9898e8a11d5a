#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "coopcheck/builder.hpp"
#include "coopcheck/problem_io.hpp"
#include "coopcheck/signatures.hpp"
#include "coopcheck/tokens.hpp"
#include "helpers.hpp"

using namespace coopcheck;
using namespace coopcheck::testing;

namespace {

// Two trucks confined to different cities: same VS, different domains.
MapProblem confined_trucks() {
    ProblemBuilder b("confined-trucks");
    b.agent("truck1").agent("truck2");
    b.variable("at(truck1)", {"c1a", "c1b"});
    b.variable("at(truck2)", {"c2a", "c2b"});
    auto drives = [&](const std::string &truck, const std::string &from,
                      const std::string &to) {
        b.action("drive(" + truck + "," + from + "," + to + ")", truck,
                 {{"at(" + truck + ")", from}}, {{"at(" + truck + ")", to}},
                 {});
    };
    drives("truck1", "c1a", "c1b");
    drives("truck1", "c1b", "c1a");
    drives("truck2", "c2a", "c2b");
    drives("truck2", "c2b", "c2a");
    b.init({{"at(truck1)", "c1a"}, {"at(truck2)", "c2a"}});
    b.goal({});
    return b.build();
}

// One rover images, the other analyzes rocks; neither can do both.
MapProblem rovers() {
    ProblemBuilder b("rovers");
    b.agent("rover1").agent("rover2");
    b.variable("equipped_for_imaging(rover1)", {"on"});
    b.variable("equipped_for_rock_analysis(rover2)", {"on"});
    b.variable("imageTaken", {"no", "yes"});
    b.variable("rockAnalyzed", {"no", "yes"});
    b.action("takeImage(rover1)", "rover1", {}, {{"imageTaken", "yes"}},
             {{"equipped_for_imaging(rover1)", "on"}});
    b.action("analyzeRock(rover2)", "rover2", {}, {{"rockAnalyzed", "yes"}},
             {{"equipped_for_rock_analysis(rover2)", "on"}});
    b.init({{"equipped_for_imaging(rover1)", "on"},
            {"equipped_for_rock_analysis(rover2)", "on"},
            {"imageTaken", "no"},
            {"rockAnalyzed", "no"}});
    b.goal({{"imageTaken", "yes"}, {"rockAnalyzed", "yes"}});
    return b.build();
}

MapProblem homogeneous_trio() {
    ProblemBuilder b("trio");
    b.agent("agent1").agent("agent2").agent("agent3");
    for (const std::string agent : {"agent1", "agent2", "agent3"})
        b.variable("pos(" + agent + ")", {"a", "b"});
    for (const std::string agent : {"agent1", "agent2", "agent3"}) {
        b.action("go(" + agent + ",a,b)", agent, {{"pos(" + agent + ")", "a"}},
                 {{"pos(" + agent + ")", "b"}}, {});
        b.action("go(" + agent + ",b,a)", agent, {{"pos(" + agent + ")", "b"}},
                 {{"pos(" + agent + ")", "a"}}, {});
    }
    b.init({{"pos(agent1)", "a"}, {"pos(agent2)", "a"}, {"pos(agent3)", "a"}});
    b.goal({});
    return b.build();
}

}  // namespace

TEST_CASE("variable signatures substitute the agent reference") {
    MapProblem diamond = fixture_diamond();
    int loc1 = diamond.variable_index("location(agent1)");
    VariableSignature sig = variable_signature(diamond, loc1, "agent1");
    CHECK(sig.token == "location(EX-AG)");
    CHECK(sig.domain == std::vector<std::string>{"room1", "room2"});

    int door = diamond.variable_index("doorLocked(room1)");
    CHECK(variable_signature(diamond, door).token == "doorLocked(room1)");

    int gem = diamond.variable_index("location(diamond1)");
    VariableSignature gem_sig = variable_signature(diamond, gem);
    CHECK(gem_sig.token == "location(diamond1)");
    CHECK(gem_sig.domain ==
          std::vector<std::string>{"room1", "room2", "EX-AG"});

    CHECK_THROWS_AS(variable_signature(diamond, loc1, "agent2"), CoopError);
}

TEST_CASE("action signatures substitute the owner everywhere") {
    MapProblem logistics = fixture_logistics_mini();
    const Action &drive = logistics.actions[static_cast<std::size_t>(
        action_index(logistics, "drive(truck1,pgh-po,pgh-airport)"))];
    ActionSignature sig = action_signature(logistics, drive);
    CHECK(sig.name == "drive(EX-AG,pgh-po,pgh-airport)");

    MapProblem diamond = fixture_diamond();
    const Action &walk = diamond.actions[static_cast<std::size_t>(
        action_index(diamond, "WalkThrough(agent2,door1,room1,room2)"))];
    CHECK(action_signature(diamond, walk).name ==
          "WalkThrough(EX-AG,door1,room1,room2)");

    const Action &steal1 = diamond.actions[static_cast<std::size_t>(
        action_index(diamond, "Steal(agent1,diamond1,room1,door1)"))];
    const Action &steal2 = diamond.actions[static_cast<std::size_t>(
        action_index(diamond, "Steal(agent2,diamond1,room1,door1)"))];
    CHECK(action_signature(diamond, steal1) ==
          action_signature(diamond, steal2));
    // The agent-valued post maps to EX-AG.
    ActionSignature steal_sig = action_signature(diamond, steal1);
    bool found = false;
    for (const auto &[token, value] : steal_sig.post)
        if (token == "location(diamond1)") {
            found = true;
            CHECK(value == "EX-AG");
        }
    CHECK(found);
}

TEST_CASE("domain heterogeneity: confined trucks yes, diamond no") {
    auto confined = confined_trucks();
    auto dh = check_dh(confined);
    REQUIRE(dh.size() == 2);
    CHECK(dh[0] == std::vector<std::string>{"at(truck1)"});
    CHECK(dh[1] == std::vector<std::string>{"at(truck2)"});

    MapProblem diamond = fixture_diamond();
    for (const auto &witnesses : check_dh(diamond))
        CHECK(witnesses.empty());
}

TEST_CASE("equal domains with different initial values are not DH") {
    ProblemBuilder b("same-domains");
    b.agent("a1").agent("a2");
    b.variable("pos(a1)", {"x", "y"});
    b.variable("pos(a2)", {"x", "y"});
    b.action("go(a1)", "a1", {{"pos(a1)", "x"}}, {{"pos(a1)", "y"}}, {});
    b.action("go(a2)", "a2", {{"pos(a2)", "x"}}, {{"pos(a2)", "y"}}, {});
    b.init({{"pos(a1)", "x"}, {"pos(a2)", "y"}});
    b.goal({});
    MapProblem p = b.build();
    for (const auto &witnesses : check_dh(p))
        CHECK(witnesses.empty());
}

TEST_CASE("variable heterogeneity: rovers yes, diamond and trio no") {
    MapProblem lab = rovers();
    auto vh = check_vh(lab);
    REQUIRE(vh.size() == 2);
    CHECK(vh[0] == std::vector<std::string>{"equipped_for_imaging(EX-AG)"});
    CHECK(vh[1] ==
          std::vector<std::string>{"equipped_for_rock_analysis(EX-AG)"});
    // VH, not DH: the signatures are disjoint.
    for (const auto &witnesses : check_dh(lab))
        CHECK(witnesses.empty());
    // Single-valued domains are annotated.
    HeterogeneityReport report = check_dvc(lab);
    CHECK(report.single_valued ==
          std::vector<std::string>{"equipped_for_imaging(rover1)",
                                   "equipped_for_rock_analysis(rover2)"});

    for (const auto &witnesses : check_vh(fixture_diamond()))
        CHECK(witnesses.empty());
    for (const auto &witnesses : check_vh(homogeneous_trio()))
        CHECK(witnesses.empty());
}

TEST_CASE("capability heterogeneity: truck and plane both ways") {
    MapProblem logistics = fixture_logistics_mini();
    auto ch = check_ch(logistics);
    REQUIRE(ch.size() == 2);
    auto has_prefix = [](const std::vector<std::string> &witnesses,
                         const std::string &prefix) {
        return std::any_of(witnesses.begin(), witnesses.end(),
                           [&](const std::string &w) {
                               return w.rfind(prefix, 0) == 0;
                           });
    };
    CHECK(has_prefix(ch[0], "drive(EX-AG"));
    CHECK(has_prefix(ch[1], "fly(EX-AG"));
    CHECK_FALSE(has_prefix(ch[0], "fly(EX-AG"));

    for (const auto &witnesses : check_ch(fixture_diamond()))
        CHECK(witnesses.empty());
}

TEST_CASE("dvc aggregates the three conditions") {
    CHECK(check_dvc(fixture_oneway_grid_gas_diesel()).dvc);
    CHECK_FALSE(check_dvc(fixture_diamond()).dvc);
    CHECK(check_dvc(fixture_logistics_single_city()).dvc);
    CHECK(is_homogeneous_team(fixture_diamond()));
    CHECK(is_homogeneous_team(fixture_oneway_grid()));
    CHECK_FALSE(is_homogeneous_team(fixture_logistics_mini()));
}

TEST_CASE("homogeneity symmetry on generated teams") {
    GeneratorProfile profile;  // homogeneous by default
    for (std::uint64_t seed = 1; seed <= 40; ++seed)
        CHECK(is_homogeneous_team(random_instance(seed, profile)));
}

TEST_CASE("witness soundness: reported sets verify by direct recomputation") {
    auto recheck = [](const MapProblem &p) {
        auto dh = check_dh(p);
        auto vh = check_vh(p);
        auto ch = check_ch(p);
        for (std::size_t g = 0; g < p.agents.size(); ++g) {
            // VH witnesses really are absent from every other agent.
            for (const auto &token : vh[g])
                for (std::size_t h = 0; h < p.agents.size(); ++h) {
                    if (h == g)
                        continue;
                    for (int v : p.agents[h].agent_vars)
                        CHECK(variable_signature(p, v).token != token);
                }
            // CH witnesses are signatures no other agent owns.
            for (const auto &canonical : ch[g])
                for (std::size_t h = 0; h < p.agents.size(); ++h) {
                    if (h == g)
                        continue;
                    for (int a : p.agents[h].actions)
                        CHECK(action_signature(
                                  p, p.actions[static_cast<std::size_t>(a)])
                                  .canonical() != canonical);
                }
            // DH witnesses name a variable with an uncovered domain value.
            for (const auto &name : dh[g]) {
                int v = p.variable_index(name);
                REQUIRE(v >= 0);
                VariableSignature sig = variable_signature(p, v);
                std::set<std::string> covered;
                for (std::size_t h = 0; h < p.agents.size(); ++h) {
                    if (h == g)
                        continue;
                    for (int w : p.agents[h].agent_vars) {
                        VariableSignature other = variable_signature(p, w);
                        if (other.token == sig.token)
                            covered.insert(other.domain.begin(),
                                           other.domain.end());
                    }
                }
                CHECK(std::any_of(sig.domain.begin(), sig.domain.end(),
                                  [&](const std::string &value) {
                                      return !covered.count(value);
                                  }));
            }
        }
    };
    recheck(confined_trucks());
    recheck(rovers());
    recheck(fixture_logistics_mini());
    GeneratorProfile heterogeneous;
    heterogeneous.homogeneous = false;
    for (std::uint64_t seed = 50; seed < 70; ++seed)
        recheck(random_instance(seed, heterogeneous));
}

TEST_CASE("super agent merges domains, signatures and capabilities") {
    MapProblem logistics = fixture_logistics_mini();
    MapProblem super = build_super_agent(logistics);
    REQUIRE(super.agents.size() == 1);
    const std::string id = super.agents[0].id;
    int at = super.variable_index("at(" + id + ")");
    REQUIRE(at >= 0);
    CHECK(super.variables[static_cast<std::size_t>(at)].domain ==
          std::vector<std::string>{"pgh-po", "pgh-airport", "bos-airport"});
    // It can both drive and fly.
    bool can_drive = false, can_fly = false;
    for (const auto &action : super.actions) {
        can_drive = can_drive || action.name.rfind("drive(", 0) == 0;
        can_fly = can_fly || action.name.rfind("fly(", 0) == 0;
    }
    CHECK(can_drive);
    CHECK(can_fly);
}

TEST_CASE("super agent of a homogeneous team mirrors one member") {
    MapProblem diamond = fixture_diamond();
    MapProblem super = build_super_agent(diamond);
    CHECK(super.variables.size() == 4);  // one location VS instead of two
    CHECK(super.actions.size() == 8);    // one grounding per signature
    int gem = super.variable_index("location(diamond1)");
    REQUIRE(gem >= 0);
    CHECK(super.variables[static_cast<std::size_t>(gem)].domain ==
          std::vector<std::string>{"room1", "room2", super.agents[0].id});
}

TEST_CASE("super agent construction is idempotent up to renaming") {
    MapProblem logistics = fixture_logistics_mini();
    MapProblem super = build_super_agent(logistics);
    MapProblem super2 = build_super_agent(super);
    std::string text2 = serialize_problem(super2);
    const std::string id2 = super2.agents[0].id;
    std::string renamed;
    std::size_t at = 0;
    while (at < text2.size()) {
        auto hit = text2.find(id2, at);
        if (hit == std::string::npos) {
            renamed += text2.substr(at);
            break;
        }
        renamed += text2.substr(at, hit - at) + super.agents[0].id;
        at = hit + id2.size();
    }
    auto strip_name = [](const std::string &text) {
        auto pos = text.find("\"name\"");
        auto end = text.find('\n', pos);
        return text.substr(0, pos) + text.substr(end + 1);
    };
    CHECK(strip_name(renamed) == strip_name(serialize_problem(super)));
}

TEST_CASE("conflicting initial values need a supplied choice") {
    ProblemBuilder b("split-start");
    b.agent("a1").agent("a2");
    b.variable("pos(a1)", {"p", "q"});
    b.variable("pos(a2)", {"p", "q"});
    for (const std::string agent : {"a1", "a2"}) {
        b.action("go(" + agent + ",p,q)", agent, {{"pos(" + agent + ")", "p"}},
                 {{"pos(" + agent + ")", "q"}}, {});
        b.action("go(" + agent + ",q,p)", agent, {{"pos(" + agent + ")", "q"}},
                 {{"pos(" + agent + ")", "p"}}, {});
    }
    b.init({{"pos(a1)", "p"}, {"pos(a2)", "q"}});
    b.goal({});
    MapProblem p = b.build();
    try {
        build_super_agent(p);
        FAIL("expected ambiguity");
    } catch (const CoopError &e) {
        CHECK(e.code() == ErrorCode::SuperagentInitAmbiguous);
    }
    SuperAgentOptions options;
    options.initial_values["pos(EX-AG)"] = "q";
    MapProblem super = build_super_agent(p, options);
    int pos = super.variable_index("pos(" + super.agents[0].id + ")");
    REQUIRE(pos >= 0);
    CHECK(value_at(super, super.init,
                   super.variables[static_cast<std::size_t>(pos)].name) ==
          "q");
}

TEST_CASE("super-agent solvability separates DVC-only RC from the rest") {
    SearchConfig cfg;
    CHECK(is_super_agent_solvable(fixture_logistics_mini(), cfg).solvable ==
          Verdict::Yes);
    CHECK(is_super_agent_solvable(fixture_diamond(), cfg).solvable ==
          Verdict::No);
    CHECK(is_super_agent_solvable(fixture_oneway_grid(), cfg).solvable ==
          Verdict::No);
}

TEST_CASE("super-agent dominance over single-agent plans") {
    GeneratorProfile profile;
    profile.full_value_cycles = true;
    SearchConfig cfg;
    int mapped = 0;
    for (std::uint64_t seed = 1; seed <= 60 && mapped < 20; ++seed) {
        MapProblem p = random_instance(seed, profile);
        SolveResult single = solve(p, {0}, cfg);
        if (single.status != SolveStatus::Solved)
            continue;
        MapProblem super = build_super_agent(p);
        Plan mapped_plan;
        bool ok = true;
        for (const auto &step : single.plan.steps) {
            const Action &action =
                p.actions[static_cast<std::size_t>(step.action)];
            ActionSignature sig = action_signature(p, action);
            std::string super_name =
                replace_token(sig.name, kExAg, super.agents[0].id);
            int index = -1;
            for (std::size_t a = 0; a < super.actions.size(); ++a)
                if (super.actions[a].name == super_name) {
                    index = static_cast<int>(a);
                    break;
                }
            if (index < 0) {
                ok = false;
                break;
            }
            mapped_plan.steps.push_back({index, 0});
        }
        REQUIRE(ok);
        ValidationResult result = validate_plan(super, mapped_plan);
        CHECK(result.valid);
        ++mapped;
    }
    CHECK(mapped >= 10);
}
