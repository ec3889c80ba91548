// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Exercises the CLI binary (BLOCHLAB_BIN) end to end and the
// library where the checks are internal.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "blochlab/report.hpp"
#include "blochlab/version.hpp"
#include "testutil.hpp"

using namespace blochlab;
namespace tu = blochlab::testutil;
using nlohmann::json;

namespace {

int failures = 0;

void verdict(int index, const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << index << ": " << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!pass) ++failures;
}

struct GoldenEntry {
    std::string label;
    std::string problem;
    int n;
    double p, q;
    std::string phi;  // single coordinate unless n == 2
    std::string bounded;
    std::string compact;
};

const std::vector<GoldenEntry> golden_corpus() {
    return {
        {"identity p=q=1", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1"]})", 1, 1.0, 1.0, "z1",
         "bounded", "not_compact"},
        {"identity p=1 q=0.5", R"({"n":1,"p":1,"q":0.5,"psi":"1","phi":["z1"]})", 1, 1.0, 0.5,
         "z1", "unbounded", "not_compact"},
        {"half contraction", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1/2"]})", 1, 1.0, 1.0,
         "z1/2", "bounded", "compact"},
        {"squaring map", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["z1^2"]})", 1, 1.0, 1.0, "z1^2",
         "bounded", "not_compact"},
        {"Moebius shift", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["(z1+1)/2"]})", 1, 1.0, 1.0,
         "(z1+1)/2", "bounded", "not_compact"},
        {"embedding n=1", R"({"n":1,"p":0.5,"q":1,"psi":"1","phi":["z1"]})", 1, 0.5, 1.0, "z1",
         "bounded", "compact"},
        {"embedding n=2", R"({"n":2,"p":0.5,"q":1,"psi":"1","phi":["z1","z2"]})", 2, 0.5, 1.0,
         "", "bounded", "not_compact"},
    };
}

// --- criterion 1: norm identity ---------------------------------------------

void criterion_norm_identity() {
    bool pass = true;
    std::ostringstream detail;
    for (double p : {0.0, 0.5, 1.0, 2.0}) {
        std::ostringstream cmd;
        cmd << tu::binary_path() << " norm z1 --p " << p << " --no-meta";
        const auto run = tu::run_command(cmd.str());
        if (run.exit_code != 0) {
            pass = false;
            detail << "exit " << run.exit_code << " at p=" << p << "; ";
            continue;
        }
        const double norm = json::parse(run.output)["norm"].get<double>();
        if (std::abs(norm - 1.0) > 1e-6) {
            pass = false;
            detail << "norm(z1," << p << ")=" << norm << "; ";
        }
    }
    verdict(1, "norm of the coordinate function is 1 for p in {0,0.5,1,2}", pass, detail.str());
}

// --- criteria 2-4: verification suites through the CLI -----------------------

void criterion_suite(int index, const std::string& suite) {
    const auto run = tu::run_command(tu::binary_path() + " verify " + suite);
    std::string first_line = run.output.substr(0, run.output.find('\n'));
    verdict(index, "verify " + suite + " reports zero violations", run.exit_code == 0,
            first_line);
}

// --- criterion 5: golden classification corpus ------------------------------

double deep_shell_max(const json& report, const std::string& label) {
    double deepest = 0.0;
    for (const auto& profile : report["compact"]["profiles"]) {
        if (profile["label"] != label || profile["margin"] != "image") continue;
        for (const auto& row : profile["rows"]) {
            if (row["m"].get<int>() <= 6 || row["sup"].is_null()) continue;
            deepest = std::max(deepest, row["sup"].get<double>());
        }
    }
    return deepest;
}

void criterion_golden_corpus() {
    bool pass = true;
    std::ostringstream detail;
    for (const auto& entry : golden_corpus()) {
        const std::string path = tu::write_temp_file("acceptance_" + entry.label, entry.problem);
        const auto run = tu::run_command(tu::binary_path() + " classify " + path +
                                         " --samples 200000 --seed 42 --no-meta");
        if (run.exit_code != 0) {
            pass = false;
            detail << entry.label << ": exit " << run.exit_code << "; ";
            continue;
        }
        const json report = json::parse(run.output);
        const std::string bounded = report["bounded"]["verdict"];
        const std::string compact = report["compact"]["verdict"];
        if (bounded != entry.bounded || compact != entry.compact) {
            pass = false;
            detail << entry.label << ": got " << bounded << "/" << compact << "; ";
            continue;
        }
        if (entry.label == "identity p=1 q=0.5") {
            const double exponent =
                report["bounded"]["B"]["divergence"]["growth_exponent"].get<double>();
            if (std::abs(exponent - 0.5) > 0.1) {
                pass = false;
                detail << "divergence exponent " << exponent << "; ";
            }
        }
        if (entry.label == "squaring map") {
            const double sup_b = report["bounded"]["B"]["value"].get<double>();
            if (std::abs(sup_b - 1.0) > 1e-2) {
                pass = false;
                detail << "sup B " << sup_b << "; ";
            }
            const double deepest = deep_shell_max(report, "B");
            if (deepest < 0.9) {
                pass = false;
                detail << "deep-shell sup " << deepest << "; ";
            }
        }
    }
    verdict(5, "golden classification corpus (verdicts and exit codes exact)", pass,
            detail.str());
}

// --- criterion 6: necessity/sufficiency consistency --------------------------

void criterion_consistency() {
    bool pass = true;
    std::ostringstream detail;

    SampleBudget classify_budget;
    classify_budget.base_count = 50000;
    SampleBudget sweep_budget;
    sweep_budget.base_count = 10000;
    sweep_budget.refine_rounds = 12;

    for (const auto& entry : golden_corpus()) {
        const ProblemSpec problem = load_problem_json(entry.problem);
        const BlochParams params = problem.params();

        std::vector<SymbolExpr> phi;
        for (const auto& s : problem.phi) phi.push_back(parse_expression(s, problem.n));
        SampleBudget validation = classify_budget;
        validation.base_count = 4096;
        const auto samples = sample_polydisk(problem.n, validation);
        const SymbolPair pair = make_symbol_pair(parse_expression(problem.psi, problem.n),
                                                 std::move(phi), problem.n, samples);

        const Classification cls = classify_bounded(pair, params, classify_budget);

        if (cls.bounded == Boundedness::unbounded) {
            const OpNormSweep sweep =
                lower_bound_opnorm(pair, params, {TestFamilyKind::fw_p1},
                                   default_parameter_grid(), sweep_budget);
            if (!(sweep.max_ratio > 10.0)) {
                pass = false;
                detail << entry.label << ": unbounded sweep ratio " << sweep.max_ratio << "; ";
            }
            continue;
        }
        if (cls.bounded != Boundedness::bounded) {
            pass = false;
            detail << entry.label << ": boundedness inconclusive; ";
            continue;
        }

        const double psi_norm =
            bloch_norm(from_expression(problem.psi, problem.n), params.q, sweep_budget)
                .norm_estimate();
        const OpNormSweep sweep = lower_bound_opnorm(
            pair, params, applicable_families(params.p), default_parameter_grid(), sweep_budget);
        const double allowed = sufficiency_upper_bound(cls, psi_norm, params);
        if (!std::isfinite(sweep.max_ratio) || sweep.max_ratio <= 0.0) {
            pass = false;
            detail << entry.label << ": sweep not finite; ";
        } else if (sweep.max_ratio > allowed) {
            pass = false;
            detail << entry.label << ": lower bound " << sweep.max_ratio << " exceeds "
                   << allowed << "; ";
        }
    }
    verdict(6, "family lower bounds stay under the sufficiency estimate", pass, detail.str());
}

// --- criterion 7: jet correctness --------------------------------------------

void criterion_jets() {
    SplitMix64 rng{20260810};
    size_t checked = 0;
    size_t bad = 0;
    double worst = 0.0;
    while (checked < 1000) {
        auto [expr, z] = tu::well_conditioned_case(rng, 2);
        const CompiledExpr f(expr, 2);
        const Jet jet = f.eval(z);
        const auto fd = tu::central_differences(
            [&](const Point& at) { return f.eval(at).value; }, z, 1e-6);
        for (int k = 0; k < 2; ++k) {
            const double err_re =
                tu::rel_error(jet.partials[static_cast<size_t>(k)], fd.real_step[static_cast<size_t>(k)]);
            const double err_im =
                tu::rel_error(jet.partials[static_cast<size_t>(k)], fd.imag_step[static_cast<size_t>(k)]);
            worst = std::max({worst, err_re, err_im});
            if (err_re >= 1e-5 || err_im >= 1e-5) ++bad;
        }
        ++checked;
    }
    std::ostringstream detail;
    detail << "1000 cases, worst relative error " << worst;
    verdict(7, "forward-mode partials match central differences", bad == 0, detail.str());
}

// --- criterion 8: determinism -------------------------------------------------

void criterion_determinism() {
    const std::string path = tu::write_temp_file(
        "acceptance_det", R"({"n":1,"p":1,"q":1,"psi":"1","phi":["(z1+1)/2"]})");
    const std::string cmd =
        tu::binary_path() + " classify " + path + " --seed 42 --no-meta --samples 100000";
    const auto first = tu::run_command(cmd);
    const auto second = tu::run_command(cmd);
    const bool pass = first.exit_code == 0 && second.exit_code == 0 &&
                      !first.output.empty() && first.output == second.output;
    verdict(8, "repeated classification with --seed 42 --no-meta is byte-identical", pass);
}

}  // namespace

int main() {
    std::cout << "acceptance suite (" << kToolName << " " << kToolVersion << ")" << std::endl;
    criterion_norm_identity();
    criterion_suite(2, "families");
    criterion_suite(3, "lemma1");
    criterion_suite(4, "lemma3");
    criterion_golden_corpus();
    criterion_consistency();
    criterion_jets();
    criterion_determinism();
    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "FAILURES: " + std::to_string(failures))
              << std::endl;
    return failures == 0 ? 0 : 1;
}
