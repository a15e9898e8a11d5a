#include <algorithm>

#include "coopcheck/builder.hpp"
#include "coopcheck/problem_io.hpp"

namespace coopcheck {

namespace {

const std::vector<std::string> kRooms = {"room1", "room2"};
const std::vector<std::string> kVertices = {"a", "b", "c"};

// Two agents in room1 must move a guarded diamond to room2. Stealing locks
// the door of room1; the override switch sits in room2.
MapProblem make_diamond() {
    ProblemBuilder b("diamond");
    b.agent("agent1").agent("agent2");
    b.variable("location(agent1)", kRooms);
    b.variable("location(agent2)", kRooms);
    b.variable("location(diamond1)", {"room1", "room2", "agent1", "agent2"});
    b.variable("doorLocked(room1)", {"false", "true"});
    b.variable("location(switch1)", kRooms);

    for (const std::string agent : {"agent1", "agent2"}) {
        const std::string loc = "location(" + agent + ")";
        for (const auto &from : kRooms) {
            const std::string to = from == "room1" ? "room2" : "room1";
            b.action("WalkThrough(" + agent + ",door1," + from + "," + to + ")",
                     agent, {{loc, from}}, {{loc, to}},
                     {{"doorLocked(room1)", "false"}});
        }
        for (const auto &room : kRooms) {
            b.action("Steal(" + agent + ",diamond1," + room + ",door1)", agent,
                     {{"location(diamond1)", room}},
                     {{"doorLocked(room1)", "true"},
                      {"location(diamond1)", agent}},
                     {{loc, room}});
        }
        for (const auto &room : kRooms) {
            b.action("Switch(" + agent + ",switch1," + room + ",door1)", agent,
                     {}, {{"doorLocked(room1)", "false"}},
                     {{"location(switch1)", room}, {loc, room}});
        }
        for (const auto &room : kRooms) {
            b.action("Place(" + agent + ",diamond1," + room + ")", agent,
                     {{"location(diamond1)", agent}},
                     {{"location(diamond1)", room}}, {{loc, room}});
        }
    }

    b.init({{"location(agent1)", "room1"},
            {"location(agent2)", "room1"},
            {"location(diamond1)", "room1"},
            {"doorLocked(room1)", "false"},
            {"location(switch1)", "room2"}});
    b.goal({{"location(diamond1)", "room2"}});
    return b.build();
}

// Two trucks at vertex a deliver packages to b and c over one-way roads.
MapProblem make_grid(const std::string &name, bool one_way,
                     bool gas_diesel) {
    ProblemBuilder b(name);
    b.agent("truck1").agent("truck2");
    b.variable("location(truck1)", kVertices);
    b.variable("location(truck2)", kVertices);
    b.variable("location(p1)", {"a", "b", "c", "truck1", "truck2"});
    b.variable("location(p2)", {"a", "b", "c", "truck1", "truck2"});
    for (const auto &from : kVertices)
        for (const auto &to : kVertices)
            if (from != to)
                b.variable("connected(" + from + "," + to + ")",
                           {"false", "true"});
    if (gas_diesel) {
        b.variable("gasPowered(truck1)", {"true"});
        b.variable("dieselPowered(truck2)", {"true"});
    }

    for (const std::string truck : {"truck1", "truck2"}) {
        const std::string loc = "location(" + truck + ")";
        for (const auto &from : kVertices)
            for (const auto &to : kVertices)
                if (from != to)
                    b.action("drive(" + truck + "," + from + "," + to + ")",
                             truck, {{loc, from}}, {{loc, to}},
                             {{"connected(" + from + "," + to + ")", "true"}});
        for (const std::string pkg : {"p1", "p2"})
            for (const auto &at : kVertices) {
                b.action("load(" + truck + "," + pkg + "," + at + ")", truck,
                         {{"location(" + pkg + ")", at}},
                         {{"location(" + pkg + ")", truck}}, {{loc, at}});
                b.action("unload(" + truck + "," + pkg + "," + at + ")", truck,
                         {{"location(" + pkg + ")", truck}},
                         {{"location(" + pkg + ")", at}}, {{loc, at}});
            }
    }

    Assignments init = {{"location(truck1)", "a"},
                        {"location(truck2)", "a"},
                        {"location(p1)", "a"},
                        {"location(p2)", "a"}};
    for (const auto &from : kVertices)
        for (const auto &to : kVertices)
            if (from != to) {
                bool open = !one_way || from == "a";
                init.emplace_back("connected(" + from + "," + to + ")",
                                  open ? "true" : "false");
            }
    if (gas_diesel) {
        init.emplace_back("gasPowered(truck1)", "true");
        init.emplace_back("dieselPowered(truck2)", "true");
    }
    b.init(init);
    b.goal({{"location(p1)", "b"}, {"location(p2)", "c"}});
    return b.build();
}

// A truck confined to one city, a plane that hops between airports, and one
// package that has to cross cities.
MapProblem make_logistics(bool two_city_goal) {
    const std::vector<std::string> truck_stops = {"pgh-po", "pgh-airport"};
    const std::vector<std::string> plane_stops = {"pgh-airport",
                                                  "bos-airport"};
    ProblemBuilder b(two_city_goal ? "logistics-mini"
                                   : "logistics-single-city");
    b.agent("truck1").agent("plane1");
    b.variable("at(truck1)", truck_stops);
    b.variable("at(plane1)", plane_stops);
    b.variable("at(pkg1)",
               {"pgh-po", "pgh-airport", "bos-airport", "truck1", "plane1"});

    auto mobile = [&](const std::string &agent, const std::string &verb,
                      const std::vector<std::string> &stops) {
        const std::string loc = "at(" + agent + ")";
        for (const auto &from : stops)
            for (const auto &to : stops)
                if (from != to)
                    b.action(verb + "(" + agent + "," + from + "," + to + ")",
                             agent, {{loc, from}}, {{loc, to}}, {});
        for (const auto &at : stops) {
            b.action("load(" + agent + ",pkg1," + at + ")", agent,
                     {{"at(pkg1)", at}}, {{"at(pkg1)", agent}}, {{loc, at}});
            b.action("unload(" + agent + ",pkg1," + at + ")", agent,
                     {{"at(pkg1)", agent}}, {{"at(pkg1)", at}}, {{loc, at}});
        }
    };
    mobile("truck1", "drive", truck_stops);
    mobile("plane1", "fly", plane_stops);

    b.init({{"at(truck1)", two_city_goal ? "pgh-airport" : "pgh-po"},
            {"at(plane1)", "pgh-airport"},
            {"at(pkg1)", "pgh-po"}});
    b.goal({{"at(pkg1)", two_city_goal ? "bos-airport" : "pgh-airport"}});
    return b.build();
}

// Loop-free layered problem matching the worked causal-graph example:
// one agent variable feeding a chain of co-updated variable pairs.
MapProblem make_figure3() {
    ProblemBuilder b("figure3-graph");
    b.agent("agent1").agent("agent2");
    b.variable("v1(agent1)", {"p0", "p1"});
    b.variable("v1(agent2)", {"p0", "p1"});
    for (int i = 2; i <= 8; ++i)
        b.variable("v" + std::to_string(i), {"0", "1"});

    const std::vector<std::string> bits = {"0", "1"};
    for (const std::string agent : {"agent1", "agent2"}) {
        const std::string pos = "v1(" + agent + ")";
        b.action("move(" + agent + ",p0,p1)", agent, {{pos, "p0"}},
                 {{pos, "p1"}}, {});
        b.action("move(" + agent + ",p1,p0)", agent, {{pos, "p1"}},
                 {{pos, "p0"}}, {});
        for (const auto &x : bits)
            for (const auto &y : bits)
                b.action("set23(" + agent + "," + x + "," + y + ")", agent, {},
                         {{"v2", x}, {"v3", y}}, {{pos, "p0"}});
        for (const auto &x : bits)
            b.action("set4(" + agent + "," + x + ")", agent, {}, {{"v4", x}},
                     {{"v3", "0"}});
        for (const auto &x : bits)
            for (const auto &y : bits)
                b.action("set57(" + agent + "," + x + "," + y + ")", agent, {},
                         {{"v5", x}, {"v7", y}}, {{"v4", "0"}});
        for (const auto &x : bits)
            for (const auto &y : bits)
                b.action("set68(" + agent + "," + x + "," + y + ")", agent, {},
                         {{"v6", x}, {"v8", y}}, {{"v5", "0"}});
    }

    Assignments init = {{"v1(agent1)", "p0"}, {"v1(agent2)", "p0"}};
    for (int i = 2; i <= 8; ++i)
        init.emplace_back("v" + std::to_string(i), "0");
    b.init(init);
    b.goal({{"v6", "1"}, {"v8", "1"}});
    return b.build();
}

}  // namespace

MapProblem fixture_diamond() {
    return make_diamond();
}

MapProblem fixture_oneway_grid() {
    return make_grid("oneway-grid", true, false);
}

MapProblem fixture_oneway_grid_gas_diesel() {
    return make_grid("oneway-grid-gas-diesel", true, true);
}

MapProblem fixture_free_grid() {
    return make_grid("free-grid", false, false);
}

MapProblem fixture_logistics_mini() {
    return make_logistics(true);
}

MapProblem fixture_logistics_single_city() {
    return make_logistics(false);
}

MapProblem fixture_figure3() {
    return make_figure3();
}

std::vector<std::string> fixture_names() {
    return {"diamond",        "oneway-grid",
            "oneway-grid-gas-diesel", "free-grid",
            "logistics-mini", "logistics-single-city",
            "figure3-graph"};
}

MapProblem fixture_by_name(const std::string &name) {
    if (name == "diamond")
        return fixture_diamond();
    if (name == "oneway-grid")
        return fixture_oneway_grid();
    if (name == "oneway-grid-gas-diesel")
        return fixture_oneway_grid_gas_diesel();
    if (name == "free-grid")
        return fixture_free_grid();
    if (name == "logistics-mini")
        return fixture_logistics_mini();
    if (name == "logistics-single-city")
        return fixture_logistics_single_city();
    if (name == "figure3-graph")
        return fixture_figure3();
    throw CoopError(ErrorCode::Structural, "unknown fixture " + name);
}

}  // namespace coopcheck
