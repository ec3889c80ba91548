// End-to-end tests driving the installed CLI binary (path via BLOCHLAB_BIN).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "testutil.hpp"

using namespace blochlab;
namespace tu = blochlab::testutil;
using nlohmann::json;

namespace {

constexpr const char* kFast = " --samples 20000 --no-meta";

std::string problem_file(const std::string& name, const std::string& content) {
    return tu::write_temp_file(name + ".json", content);
}

json parse_output(const std::string& text) { return json::parse(text); }

}  // namespace

TEST_CASE("classify: identity composition is bounded, not compact, exit 0") {
    const std::string path =
        problem_file("cli_id", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1"]})");
    const auto run = tu::run_command(tu::binary_path() + " classify " + path + kFast);
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    CHECK(report["bounded"]["verdict"] == "bounded");
    CHECK(report["compact"]["verdict"] == "not_compact");
    CHECK(report["regime"] == "p=1");
    CHECK(report.contains("meta") == false);
}

TEST_CASE("classify: compactly contained image, exit 0") {
    const std::string path =
        problem_file("cli_half", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1/2"]})");
    const auto run = tu::run_command(tu::binary_path() + " classify " + path + kFast);
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    CHECK(report["bounded"]["verdict"] == "bounded");
    CHECK(report["compact"]["verdict"] == "compact");
}

TEST_CASE("classify: divergent target exponent, exit 0 with unbounded verdict") {
    const std::string path =
        problem_file("cli_unb", R"({"n":1,"p":1,"q":0.5,"psi":"1","phi":["z1"]})");
    const auto run = tu::run_command(tu::binary_path() + " classify " + path + kFast);
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    CHECK(report["bounded"]["verdict"] == "unbounded");
    CHECK(report["compact"]["verdict"] == "not_compact");
    const double exponent = report["bounded"]["B"]["divergence"]["growth_exponent"];
    CHECK(std::abs(exponent - 0.5) < 0.1);
}

TEST_CASE("classify: malformed JSON and non-self-maps exit 2") {
    const std::string bad = problem_file("cli_bad", "{not json");
    CHECK(tu::run_command(tu::binary_path() + " classify " + bad + kFast).exit_code == 2);

    const std::string escape =
        problem_file("cli_escape", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["2*z1"]})");
    const auto run = tu::run_command(tu::binary_path() + " classify " + escape + kFast);
    CHECK(run.exit_code == 2);
    CHECK(run.output.find("witness") != std::string::npos);

    CHECK(tu::run_command(tu::binary_path() + " classify /nonexistent.json").exit_code == 2);
}

TEST_CASE("norm: coordinate function is 1, exit 0") {
    const auto run =
        tu::run_command(tu::binary_path() + " norm z1 --p 1" + kFast);
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    CHECK(std::abs(report["norm"].get<double>() - 1.0) < 1e-6);
}

TEST_CASE("norm: log family member stays under its bound") {
    const auto run = tu::run_command(tu::binary_path() + " norm 'ln(4/(1 - 0.5*z1))' --p 1" +
                                     kFast);
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    CHECK(report["norm"].get<double>() <= 2.0 + std::log(4.0));
}

TEST_CASE("norm: boundary pole at p=0 is a divergent sentinel, exit 4") {
    const auto run =
        tu::run_command(tu::binary_path() + " norm 'z1/(1-z1)' --p 0" + kFast);
    CHECK(run.exit_code == 4);
    const json report = parse_output(run.output);
    CHECK(report["divergent"] == true);
    CHECK(report["norm"].is_null());
}

TEST_CASE("norm: pole outside the closed disk keeps the p=0 norm finite") {
    // sup |f'| over U is 1/(1-0.9)^2 = 100 here; the shell fit confirms the
    // plateau, so this is a finite norm, not a divergence.
    const auto run =
        tu::run_command(tu::binary_path() + " norm 'z1/(1-0.9*z1)' --p 0" + kFast);
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    CHECK(report["divergent"] == false);
    CHECK(report["norm"].get<double>() == doctest::Approx(100.0).epsilon(1e-2));
}

TEST_CASE("norm: parse errors exit 2") {
    CHECK(tu::run_command(tu::binary_path() + " norm 'z1 +' --p 1" + kFast).exit_code == 2);
    CHECK(tu::run_command(tu::binary_path() + " norm 'sin(z1)' --p 1" + kFast).exit_code == 2);
    CHECK(tu::run_command(tu::binary_path() + " norm 'z3' --p 1 --n 2" + kFast).exit_code == 2);
}

TEST_CASE("verify: unknown suite and out-of-range exponents exit 2") {
    CHECK(tu::run_command(tu::binary_path() + " verify nonsense").exit_code == 2);
    CHECK(tu::run_command(tu::binary_path() + " verify lemma3 --p 1").exit_code == 2);
}

TEST_CASE("verify: remark1 passes quickly") {
    const auto run = tu::run_command(tu::binary_path() + " verify remark1 --samples 20000");
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("PASS") != std::string::npos);
}

TEST_CASE("profile: identity map has unit B rows everywhere populated") {
    const std::string path =
        problem_file("cli_prof_id", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1"]})");
    const auto run = tu::run_command(tu::binary_path() + " profile " + path +
                                     " --functional B" + kFast);
    REQUIRE(run.exit_code == 0);
    std::istringstream lines(run.output);
    std::string line;
    std::getline(lines, line);  // "# B ..." comment
    CHECK(line.rfind("# B", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "shell_index,delta_low,delta_high,sup,count");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.find("empty") == std::string::npos);
        const auto last_comma = line.rfind(',');
        const auto prev_comma = line.rfind(',', last_comma - 1);
        const double sup = std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1));
        CHECK(sup == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(rows == 12);
}

TEST_CASE("profile: compactly contained image emits only empty rows") {
    const std::string path =
        problem_file("cli_prof_half", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1/2"]})");
    const auto run = tu::run_command(tu::binary_path() + " profile " + path +
                                     " --functional B" + kFast);
    REQUIRE(run.exit_code == 0);
    std::istringstream lines(run.output);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        CHECK(line.find(",empty,") != std::string::npos);
        CHECK(line.back() == '0');
    }
}

TEST_CASE("profile: squaring map sups increase toward one as shells deepen") {
    const std::string path =
        problem_file("cli_prof_sq", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1^2"]})");
    const auto run = tu::run_command(tu::binary_path() + " profile " + path +
                                     " --functional B --format json" + kFast);
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    const auto& rows = report["profiles"][0]["rows"];
    double previous = 0.0;
    double deepest = 0.0;
    for (const auto& row : rows) {
        if (row["sup"].is_null()) continue;
        const double sup = row["sup"].get<double>();
        CHECK(sup >= previous - 1e-9);
        previous = sup;
        deepest = sup;
    }
    CHECK(deepest > 0.99);
}

TEST_CASE("per-l profile uses the per-coordinate margin") {
    const std::string path = problem_file(
        "cli_prof_perl", R"({"n":2,"p":0.5,"q":1,"psi":"1","phi":["z1","z2"]})");
    const auto run = tu::run_command(tu::binary_path() + " profile " + path +
                                     " --functional per-l" + kFast);
    REQUIRE(run.exit_code == 0);
    CHECK(run.output.find("# per_l:1 margin=phi_l") != std::string::npos);
    CHECK(run.output.find("# per_l:2 margin=phi_l") != std::string::npos);
}

TEST_CASE("classify reports are byte-identical under --no-meta and a fixed seed") {
    const std::string path =
        problem_file("cli_det", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["(z1+1)/2"]})");
    const std::string cmd =
        tu::binary_path() + " classify " + path + " --seed 42 --samples 20000 --no-meta";
    const auto first = tu::run_command(cmd);
    const auto second = tu::run_command(cmd);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(!first.output.empty());
}

TEST_CASE("raising tau_big past the shell sups makes the verdict inconclusive, exit 3") {
    // For the squaring map the deep-shell B sups sit near 1: with
    // tau_big = 2 nothing persists, and with tau tiny nothing decays.
    const std::string path =
        problem_file("cli_incon", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1^2"]})");
    const auto run = tu::run_command(tu::binary_path() + " classify " + path +
                                     " --tau-big 2.0" + kFast);
    CHECK(run.exit_code == 3);
    const json report = parse_output(run.output);
    CHECK(report["compact"]["verdict"] == "inconclusive");
    CHECK(report["thresholds"]["tau_big"] == 2.0);
}

TEST_CASE("the problem echo of a report is itself a loadable problem") {
    const std::string path =
        problem_file("cli_echo", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1/2"]})");
    const auto first = tu::run_command(tu::binary_path() + " classify " + path + kFast);
    REQUIRE(first.exit_code == 0);
    const json report = parse_output(first.output);

    const std::string echoed = tu::write_temp_file("cli_echo_back", report["problem"].dump());
    const auto second = tu::run_command(tu::binary_path() + " classify " + echoed + " --no-meta");
    REQUIRE(second.exit_code == 0);
    const json reread = parse_output(second.output);
    CHECK(reread["problem"] == report["problem"]);
}

TEST_CASE("families: report carries bounds and no violations at p=1") {
    const auto run =
        tu::run_command(tu::binary_path() + " families --p 1 --samples 20000 --no-meta");
    REQUIRE(run.exit_code == 0);
    const json report = parse_output(run.output);
    CHECK(report["violations"] == 0);
    CHECK(report["entries"].size() > 0);
}
