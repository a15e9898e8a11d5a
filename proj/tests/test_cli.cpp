#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "coopcheck/problem_io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
    std::string command = std::string(COOPCHECK_BIN) + " " + args +
                          " > /dev/null 2>&1";
    int status = std::system(command.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "coopcheck-cli-test";
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string &name) const {
        return (path / name).string();
    }
};

}  // namespace

TEST_CASE("exit code contract across the fixtures") {
    TempDir dir;
    for (const auto &name : coopcheck::fixture_names()) {
        std::string problem = dir.file(name + ".json");
        CHECK(run("fixtures " + name + " --out " + problem) == 0);
        CHECK(run("analyze " + problem) == 0);
    }
}

TEST_CASE("input errors exit with code 2") {
    TempDir dir;
    CHECK(run("analyze " + dir.file("does-not-exist.json")) == 2);
    std::string malformed = dir.file("broken.json");
    std::ofstream(malformed) << "{ not json";
    CHECK(run("analyze " + malformed) == 2);
    CHECK(run("fixtures no-such-fixture") == 2);
}

TEST_CASE("caps exit with code 3") {
    TempDir dir;
    std::string problem = dir.file("diamond.json");
    REQUIRE(run("fixtures diamond --out " + problem) == 0);
    CHECK(run("analyze " + problem + " --max-states 5") == 3);
}

TEST_CASE("analyze writes DOT and JSON artifacts") {
    TempDir dir;
    std::string problem = dir.file("diamond.json");
    REQUIRE(run("fixtures diamond --out " + problem) == 0);
    std::string dot = dir.file("diamond.dot");
    std::string json_path = dir.file("report.json");
    CHECK(run("analyze " + problem + " --minimal-k --dot " + dot +
              " --json " + json_path) == 0);
    REQUIRE(fs::exists(dot));
    REQUIRE(fs::exists(json_path));

    std::ifstream json_in(json_path);
    nlohmann::json report = nlohmann::json::parse(json_in);
    CHECK(report.at("rc") == "yes");
    CHECK(report.at("rc_class") == "type-2");
    CHECK(report.at("minimal_k").at("k") == 2);

    std::ifstream dot_in(dot);
    std::string dot_text((std::istreambuf_iterator<char>(dot_in)),
                         std::istreambuf_iterator<char>());
    CHECK(dot_text.find("location(EX-AG)") != std::string::npos);
    CHECK(dot_text.find(" -- ") != std::string::npos);
}

TEST_CASE("fixture output parses back into the same problem") {
    TempDir dir;
    std::string problem = dir.file("grid.json");
    REQUIRE(run("fixtures oneway-grid --out " + problem) == 0);
    coopcheck::MapProblem parsed = coopcheck::load_problem(problem);
    coopcheck::MapProblem direct = coopcheck::fixture_oneway_grid();
    CHECK(coopcheck::serialize_problem(parsed) ==
          coopcheck::serialize_problem(direct));
}

TEST_CASE("ambiguous super-agent inits are reported, flag resolves them") {
    TempDir dir;
    // Heterogeneous team whose shared VS starts in two different values:
    // analysis completes (the super-agent check records the ambiguity).
    std::string problem = dir.file("split.json");
    std::ofstream(problem) << R"__({
        "agents": ["a1", "a2"],
        "variables": [
            {"name": "pos(a1)", "domain": ["p", "q"]},
            {"name": "pos(a2)", "domain": ["p", "q"]},
            {"name": "flag(a1)", "domain": ["on"]},
            {"name": "goal", "domain": ["0", "1"]}
        ],
        "actions": [
            {"name": "go(a1,p,q)", "agent": "a1",
             "pre": {"pos(a1)": "p"}, "post": {"pos(a1)": "q"}},
            {"name": "go(a2,p,q)", "agent": "a2",
             "pre": {"pos(a2)": "p"}, "post": {"pos(a2)": "q"}},
            {"name": "finish(a2)", "agent": "a2",
             "post": {"goal": "1"}, "prv": {"pos(a2)": "q"}}
        ],
        "init": {"pos(a1)": "p", "pos(a2)": "q", "flag(a1)": "on",
                 "goal": "0"},
        "goal": {"goal": "1"}
    })__";
    CHECK(run("analyze " + problem) == 0);
    CHECK(run("analyze " + problem + " --super-init \"pos(EX-AG)=p\"") == 0);
    CHECK(run("analyze " + problem + " --super-init nonsense") == 2);
}
