#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#ifndef TMON_CLI_PATH
#error "TMON_CLI_PATH must point at the tmon binary"
#endif

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
Run tmon(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" TMON_CLI_PATH "' " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (const auto n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("tmon_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("ultrasets on three points") {
    const auto r = tmon("ultra enumerate --size 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("8 families") != std::string::npos);
    const auto uf = tmon("ultra enumerate --kind uf --size 5");
    CHECK(uf.code == 0);
    CHECK(uf.out.find("5 families") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(tmon("ultra verify --size 3").code == 0);
    CHECK(tmon("monad laws --spec maybe").code == 0);
    CHECK(tmon("monad laws --spec maybe --corrupt").code == 2);
    CHECK(tmon("ultra enumerate --size 9").code == 3);
    CHECK(tmon("monad laws --spec tree").code == 3);
    CHECK(tmon("monad laws --spec '{broken'").code == 3);
    CHECK(tmon("no-such-command").code == 3);
    CHECK(tmon("--cap 1000 codensity object --c 4 --D 2 --algorithm end").code == 4);
}

TEST_CASE("environment and flag precedence") {
    const std::string cmd = "codensity object --c 4 --D 2 --algorithm end";
    CHECK(tmon(cmd).code == 0);
    CHECK(tmon(cmd, "TMON_CAP=1000").code == 4);
    CHECK(tmon("--cap 100000 " + cmd, "TMON_CAP=1000").code == 0);
    const auto seeded = tmon("--json - monad laws --spec maybe", "TMON_SEED=9");
    REQUIRE(seeded.code == 0);
    CHECK(nlohmann::json::parse(seeded.out)["config"]["seed"] == 9);
    const auto flagged = tmon("--seed 4 --json - monad laws --spec maybe", "TMON_SEED=9");
    CHECK(nlohmann::json::parse(flagged.out)["config"]["seed"] == 4);
}

TEST_CASE("JSON envelope") {
    const auto r = tmon("--json - ultra enumerate --size 3");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["tool"] == "tmon");
    CHECK(j["exit_code"] == 0);
    CHECK(j["report"]["data"]["count"] == 8);
    CHECK(j["report"]["data"]["families"].size() == 8);
}

TEST_CASE("codensity object sizes from both algorithms") {
    for (const auto* algo : {"comma", "end"}) {
        const auto r = tmon(std::string("--json - codensity object --c 3 --D 1,2 --algorithm ") + algo);
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["report"]["data"]["size"] == 8);
    }
}

TEST_CASE("recheck reproduces recorded verdicts") {
    const auto path = scratch("laws.json");
    REQUIRE(tmon("--json '" + path.string() + "' --seed 5 monad laws --spec powerset").code == 0);
    const auto again = tmon("recheck '" + path.string() + "'");
    CHECK(again.code == 0);
    CHECK(again.out.find("verdict reproduced") != std::string::npos);

    // A verdict flipped on disk is reported as a mismatch.
    nlohmann::json j;
    std::ifstream(path) >> j;
    j["report"]["checks"][0]["verdict"] = "fail";
    std::ofstream(path) << j.dump();
    CHECK(tmon("recheck '" + path.string() + "'").code == 2);
    std::filesystem::remove(path);
    CHECK(tmon("recheck /nonexistent/report.json").code == 3);
}

TEST_CASE("facts scorecard passes") {
    const auto r = tmon("facts");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
