#include <random>
#include <string>
#include <vector>

#include "coopcheck/builder.hpp"
#include "coopcheck/problem_io.hpp"

namespace coopcheck {

namespace {

// Bounded sampling goes through the raw engine so that instances are
// reproducible across standard libraries.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    int below(int n) {
        return n <= 1 ? 0
                      : static_cast<int>(engine() %
                                         static_cast<std::uint64_t>(n));
    }
    int range(int lo, int hi) {
        return lo + below(hi - lo + 1);
    }
    bool percent(int p) {
        return below(100) < p;
    }
};

struct Condition {
    int var;  // world variable index (0-based) or -1 for the agent position
    int value;
};

struct Schema {
    std::string op;
    std::vector<Condition> pre;   // paired with an update on the same var
    std::vector<Condition> prv;
    std::vector<Condition> post;
};

}  // namespace

MapProblem random_instance(std::uint64_t seed,
                           const GeneratorProfile &profile) {
    if (profile.min_agents < 1 || profile.min_agents > profile.max_agents ||
        profile.max_agents > 4 || profile.max_extra_vars < 1 ||
        profile.max_extra_vars > 6 || profile.max_domain < 2 ||
        profile.max_domain > 4 || profile.max_schemas < 1 ||
        profile.max_schemas > 12)
        throw CoopError(ErrorCode::Structural,
                        "generator profile outside desk-scale bounds");

    Rng rng(seed);
    const int num_agents = rng.range(profile.min_agents, profile.max_agents);
    const int num_world = rng.range(1, profile.max_extra_vars);
    const int pos_domain = rng.range(2, profile.max_domain);
    std::vector<int> world_domain(static_cast<std::size_t>(num_world));
    for (auto &size : world_domain)
        size = rng.range(2, profile.max_domain);

    std::vector<Schema> schemas;
    auto value_name = [](int var, int value) {
        return "d" + std::to_string(var) + std::to_string(value);
    };

    if (profile.full_value_cycles) {
        for (int step = 0; step < pos_domain; ++step) {
            Schema schema;
            schema.op = "walk" + std::to_string(step);
            schema.pre.push_back({-1, step});
            schema.post.push_back({-1, (step + 1) % pos_domain});
            schemas.push_back(std::move(schema));
        }
        for (int var = 0; var < num_world; ++var)
            for (int step = 0; step < world_domain[static_cast<std::size_t>(
                     var)]; ++step) {
                Schema schema;
                schema.op = "cycle" + std::to_string(var) + "_" +
                            std::to_string(step);
                schema.pre.push_back({var, step});
                schema.post.push_back(
                    {var, (step + 1) %
                              world_domain[static_cast<std::size_t>(var)]});
                if (rng.percent(profile.agent_prv_percent))
                    schema.prv.push_back({-1, rng.below(pos_domain)});
                schemas.push_back(std::move(schema));
            }
    }

    const int num_random = rng.range(1, profile.max_schemas);
    for (int i = 0; i < num_random; ++i) {
        Schema schema;
        schema.op = "op" + std::to_string(i);
        const int kind = rng.below(3);
        if (kind == 0) {
            // Move the agent position.
            int from = rng.below(pos_domain);
            int to = (from + 1 + rng.below(pos_domain - 1)) % pos_domain;
            schema.pre.push_back({-1, from});
            schema.post.push_back({-1, to});
            if (rng.percent(profile.var_prv_percent)) {
                int var = rng.below(num_world);
                schema.prv.push_back(
                    {var, rng.below(world_domain[static_cast<std::size_t>(
                              var)])});
            }
        } else {
            // Update one or two world variables.
            int first = rng.below(num_world);
            std::vector<int> updated = {first};
            if (kind == 2 && num_world > 1 &&
                rng.percent(profile.co_update_percent)) {
                int second = rng.below(num_world - 1);
                if (second >= first)
                    ++second;
                updated.push_back(second);
            }
            for (int var : updated) {
                int size = world_domain[static_cast<std::size_t>(var)];
                int to = rng.below(size);
                if (rng.percent(50)) {
                    int from = rng.below(size);
                    if (from != to)
                        schema.pre.push_back({var, from});
                }
                schema.post.push_back({var, to});
            }
            if (rng.percent(profile.agent_prv_percent))
                schema.prv.push_back({-1, rng.below(pos_domain)});
            if (rng.percent(profile.var_prv_percent)) {
                int var = rng.below(num_world);
                bool used = false;
                for (int u : updated)
                    used = used || u == var;
                for (const auto &c : schema.pre)
                    used = used || c.var == var;
                if (!used)
                    schema.prv.push_back(
                        {var, rng.below(world_domain[static_cast<std::size_t>(
                                  var)])});
            }
        }
        schemas.push_back(std::move(schema));
    }

    // Heterogeneity mutation: drop a capability, add a private variable, or
    // widen one agent's position domain.
    int mutation = -1;
    if (!profile.homogeneous && num_agents > 1)
        mutation = rng.below(3);

    ProblemBuilder b("random-" + std::to_string(seed));
    std::vector<std::string> agent_names;
    for (int g = 1; g <= num_agents; ++g) {
        agent_names.push_back("agent" + std::to_string(g));
        b.agent(agent_names.back());
    }
    const std::string mutant = agent_names.back();

    for (int g = 0; g < num_agents; ++g) {
        std::vector<std::string> domain;
        for (int value = 0; value < pos_domain; ++value)
            domain.push_back("p" + std::to_string(value));
        if (mutation == 2 && agent_names[static_cast<std::size_t>(g)] == mutant)
            domain.push_back("p" + std::to_string(pos_domain));
        b.variable("pos(" + agent_names[static_cast<std::size_t>(g)] + ")",
                   domain);
    }
    for (int var = 0; var < num_world; ++var) {
        std::vector<std::string> domain;
        for (int value = 0;
             value < world_domain[static_cast<std::size_t>(var)]; ++value)
            domain.push_back(value_name(var, value));
        b.variable("x" + std::to_string(var), domain);
    }
    if (mutation == 1)
        b.variable("special(" + mutant + ")", {"on"});

    auto ground = [&](const Schema &schema, const std::string &agent) {
        auto resolve = [&](const Condition &c) -> std::pair<std::string,
                                                            std::string> {
            if (c.var < 0)
                return {"pos(" + agent + ")", "p" + std::to_string(c.value)};
            return {"x" + std::to_string(c.var), value_name(c.var, c.value)};
        };
        Assignments pre, post, prv;
        for (const auto &c : schema.pre)
            pre.push_back(resolve(c));
        for (const auto &c : schema.post)
            post.push_back(resolve(c));
        for (const auto &c : schema.prv)
            prv.push_back(resolve(c));
        b.action(schema.op + "(" + agent + ")", agent, pre, post, prv);
    };
    for (std::size_t s = 0; s < schemas.size(); ++s)
        for (const auto &agent : agent_names) {
            if (mutation == 0 && agent == mutant && s + 1 == schemas.size() &&
                schemas.size() > 1)
                continue;  // capability gap
            ground(schemas[s], agent);
        }

    Assignments init;
    const int shared_pos = rng.below(pos_domain);
    for (const auto &agent : agent_names) {
        int value = profile.homogeneous ? shared_pos : rng.below(pos_domain);
        init.emplace_back("pos(" + agent + ")", "p" + std::to_string(value));
    }
    for (int var = 0; var < num_world; ++var)
        init.emplace_back(
            "x" + std::to_string(var),
            value_name(var, rng.below(world_domain[static_cast<std::size_t>(
                                var)])));
    if (mutation == 1)
        init.emplace_back("special(" + mutant + ")", "on");
    b.init(init);

    Assignments goal;
    const int goal_vars = rng.range(1, num_world > 1 ? 2 : 1);
    int first_goal = rng.below(num_world);
    for (int i = 0; i < goal_vars; ++i) {
        int var = (first_goal + i) % num_world;
        goal.emplace_back(
            "x" + std::to_string(var),
            value_name(var, rng.below(world_domain[static_cast<std::size_t>(
                                var)])));
    }
    b.goal(goal);

    return b.build(num_agents == 1);
}

}  // namespace coopcheck
