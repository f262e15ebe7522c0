#include <doctest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qdim/pressure.hpp"

#ifndef QDIM_CLI_PATH
#define QDIM_CLI_PATH "qdim"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult res;
    const std::string cmd = std::string(QDIM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

}  // namespace

TEST_CASE("dim emits the stable JSON schema") {
    const RunResult res = run("dim --p 0.4,0.35,0.25 --r 2 --depth 120");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    for (const char* key :
         {"p", "r", "t0", "chi_r", "p_at_t0", "depth", "tolerance", "diagnostics"})
        CHECK(j.contains(key));
    CHECK(j["t0"].get<double>() > 0.0);
    CHECK(j["t0"].get<double>() < 1.0);
    CHECK(j["diagnostics"].contains("standing_assumption"));
}

TEST_CASE("dim is byte-identical across runs") {
    const RunResult a = run("dim --p 0.4,0.35,0.25 --r 2 --depth 120");
    const RunResult b = run("dim --p 0.4,0.35,0.25 --r 2 --depth 120");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("dim notes the mirrored standing assumption") {
    const RunResult res = run("dim --p 0.3,0.3,0.4 --r 2 --depth 120");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["diagnostics"]["standing_assumption"] == "mirrored");
    CHECK(j["diagnostics"]["note"] == "standing-assumption: mirrored");
}

TEST_CASE("pressure emits the CSV schema with one sign change") {
    const RunResult res = run("pressure --p 0.4,0.35,0.25 --r 2 --depth 64 --t-grid 0:1.2:0.05");
    REQUIRE(res.exit_code == 0);
    std::istringstream in(res.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,p_t,P_t,rt_log3");
    int sign_changes = 0;
    double prev_P = 0.0;
    bool first = true;
    std::string line;
    while (std::getline(in, line)) {
        double t, pt, Pt, rt;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &pt, &Pt, &rt) == 4);
        if (!first && (Pt > 0.0) != (prev_P > 0.0)) ++sign_changes;
        prev_P = Pt;
        first = false;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("pressure CSV round-trips the library values exactly") {
    // %.17g preserves doubles bit-for-bit through parse
    const RunResult res = run("pressure --p 0.4,0.35,0.25 --r 2 --depth 64 --t-grid 0:1:0.5");
    REQUIRE(res.exit_code == 0);
    qdim::PotentialContext ctx(qdim::ProbabilityVector(0.4, 0.35, 0.25));
    std::istringstream in(res.out);
    std::string line;
    std::getline(in, line);  // header
    for (double expected_t : {0.0, 0.5, 1.0}) {
        REQUIRE(std::getline(in, line));
        double t, pt, Pt, rt;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &pt, &Pt, &rt) == 4);
        CHECK(t == expected_t);
        CHECK(pt == qdim::pressure(ctx, t, 64, false).value);
        CHECK(Pt == qdim::pressure_P(ctx, t, 2.0, 64));
    }
}

TEST_CASE("empirical emits both output formats") {
    const std::string args =
        "--p 0.4,0.35,0.25 --r 2 --depth 9 --t0-depth 120 --n-grid 8,16,32,64";
    const RunResult js = run("empirical " + args);
    REQUIRE(js.exit_code == 0);
    const auto j = nlohmann::json::parse(js.out);
    for (const char* key : {"r", "slope", "chi_r", "abs_gap"}) CHECK(j.contains(key));

    const RunResult csv = run("empirical " + args + " --output csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("n,V,e,n_e_chi\n", 0) == 0);
}

TEST_CASE("antichain emits the JSON schema") {
    const RunResult res =
        run("antichain --p 0.4,0.35,0.25 --r 2 --epsilon 1e-2 --t0-depth 120");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    for (const char* key : {"epsilon", "count", "min_len", "max_len", "sum_phi_hat", "kind"})
        CHECK(j.contains(key));
    CHECK(j["kind"] == "gamma_hat");
    CHECK(j["count"].get<int>() > 0);
}

TEST_CASE("argument errors exit with status 2") {
    CHECK(run("dim --r 2").exit_code == 2);                       // missing --p
    CHECK(run("dim --p 0.4,0.35 --r 2").exit_code == 2);          // short vector
    CHECK(run("dim --p 0.5,0.4,0.2 --r 2").exit_code == 2);       // bad sum
    CHECK(run("nonsense").exit_code == 2);                        // unknown command
    CHECK(run("antichain --p 0.4,0.35,0.25 --r 2 --epsilon 0.9 --t0-depth 120").exit_code ==
          2);  // epsilon above epsilon_zero
}

TEST_CASE("verify succeeds on the canonical vector") {
    const RunResult res = run("verify --depth 4 --seed 7");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("[FAIL]") == std::string::npos);
    CHECK(res.out.find("[PASS]") != std::string::npos);
}
