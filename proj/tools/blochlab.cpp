// blochlab CLI: classify weighted composition operators between p-Bloch
// spaces on the unit polydisk, estimate norms, verify the inequality suites
// and dump boundary-shell profiles.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "blochlab/report.hpp"
#include "blochlab/version.hpp"

namespace {

using namespace blochlab;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInput = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitDivergent = 4;

struct CommonFlags {
    std::optional<size_t> samples;
    std::optional<int> shells;
    std::optional<int> refine;
    std::optional<uint64_t> seed;
    std::optional<double> tau;
    std::optional<double> tau_big;
    std::string out;
    std::string format;
    bool no_meta = false;

    void attach(CLI::App* cmd, const char* default_format) {
        format = default_format;
        cmd->add_option("--samples", samples, "stratified sample count");
        cmd->add_option("--shells", shells, "number of dyadic boundary shells");
        cmd->add_option("--refine", refine, "pattern-search refinement rounds");
        cmd->add_option("--seed", seed, "sampling seed");
        cmd->add_option("--tau", tau, "compact decay threshold");
        cmd->add_option("--tau-big", tau_big, "persistence threshold forcing NotCompact");
        cmd->add_option("--out", out, "write the report to this path instead of stdout");
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        cmd->add_flag("--no-meta", no_meta, "omit wall time so reruns are byte-identical");
    }

    void apply(ProblemSpec& problem) const {
        if (samples) problem.budget.base_count = *samples;
        if (shells) problem.budget.shells = *shells;
        if (refine) problem.budget.refine_rounds = *refine;
        if (seed) problem.budget.seed = *seed;
        if (tau) problem.thresholds.tau = *tau;
        if (tau_big) problem.thresholds.tau_big = *tau_big;
        if (!problem.budget.valid()) throw InputError("invalid budget from flags");
    }

    SampleBudget budget() const {
        SampleBudget b;
        if (samples) b.base_count = *samples;
        if (shells) b.shells = *shells;
        if (refine) b.refine_rounds = *refine;
        if (seed) b.seed = *seed;
        if (!b.valid()) throw InputError("invalid budget from flags");
        return b;
    }
};

void emit(const CommonFlags& flags, const std::string& text) {
    if (flags.out.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream file(flags.out, std::ios::binary);
        if (!file) throw InputError("cannot open output path: " + flags.out);
        file << text;
        if (text.empty() || text.back() != '\n') file << '\n';
    }
}

class Stopwatch {
public:
    std::optional<double> elapsed_ms(bool no_meta) const {
        if (no_meta) return std::nullopt;
        const auto dt = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(dt).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

SymbolPair build_pair(const ProblemSpec& problem) {
    std::vector<SymbolExpr> phi;
    phi.reserve(problem.phi.size());
    for (const auto& text : problem.phi) phi.push_back(parse_expression(text, problem.n));
    SymbolExpr psi = parse_expression(problem.psi, problem.n);

    SampleBudget validation = problem.budget;
    validation.base_count = 4096;
    validation.refine_rounds = 0;
    const auto samples = sample_polydisk(problem.n, validation);
    return make_symbol_pair(std::move(psi), std::move(phi), problem.n, samples);
}

SampleBudget sweep_budget_from(const SampleBudget& budget) {
    SampleBudget b = budget;
    b.base_count = std::max<size_t>(budget.base_count / 20, 5000);
    // Family seminorms peak in narrow angular needles near the parameter
    // direction; deep pattern search resolves them cheaply.
    b.refine_rounds = 12;
    return b;
}

int cmd_classify(const std::string& path, const CommonFlags& flags) {
    if (flags.format != "json") throw InputError("classify reports are JSON");
    Stopwatch watch;
    ProblemSpec problem = load_problem_file(path);
    flags.apply(problem);

    const SymbolPair pair = build_pair(problem);
    const Classification cls =
        classify(pair, problem.params(), problem.budget, problem.thresholds);
    const OpNormSweep sweep =
        lower_bound_opnorm(pair, problem.params(), applicable_families(problem.p),
                           default_parameter_grid(), sweep_budget_from(problem.budget));

    emit(flags, classification_report_json(problem, pair, cls, sweep,
                                           watch.elapsed_ms(flags.no_meta)));
    const bool decisive = cls.bounded != Boundedness::inconclusive &&
                          cls.compact != Compactness::inconclusive;
    return decisive ? kExitOk : kExitInconclusive;
}

int cmd_norm(const std::string& expression, double p, int n, const CommonFlags& flags) {
    if (flags.format != "json") throw InputError("norm reports are JSON");
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("p must be finite and >= 0");
    if (n < 1) throw InputError("n must be >= 1");
    Stopwatch watch;
    const SampleBudget budget = flags.budget();
    const HolomorphicFunction f = from_expression(expression, n);
    const NormReport report = bloch_norm(f, p, budget);
    emit(flags, norm_report_json(expression, p, budget, report,
                                 watch.elapsed_ms(flags.no_meta)));
    return report.divergent() ? kExitDivergent : kExitOk;
}

int cmd_verify(const std::string& suite_name, std::optional<double> p_override,
               const CommonFlags& flags) {
    const SampleBudget budget = flags.budget();
    SuiteResult suite;
    if (suite_name == "lemma1") {
        suite = run_lemma1_suite(budget);
    } else if (suite_name == "lemma3") {
        std::vector<double> p_grid = {0.0, 0.25, 0.5, 0.9};
        if (p_override) {
            if (!(*p_override >= 0.0) || *p_override >= 1.0) {
                throw InputError("lemma3 requires p < 1");
            }
            p_grid = {*p_override};
        }
        suite = run_lemma3_suite(budget, p_grid);
    } else if (suite_name == "families") {
        suite = run_families_suite(budget);
    } else if (suite_name == "remark1") {
        suite = run_remark1_suite(budget);
    } else {
        throw InputError("unknown suite: " + suite_name +
                         " (expected lemma1, lemma3, families or remark1)");
    }
    emit(flags, flags.format == "json" ? suite_report_json(suite, budget)
                                       : suite_report_text(suite));
    return suite.pass() ? kExitOk : kExitViolations;
}

int cmd_profile(const std::string& path, const std::string& functional,
                const CommonFlags& flags) {
    Stopwatch watch;
    ProblemSpec problem = load_problem_file(path);
    flags.apply(problem);
    const SymbolPair pair = build_pair(problem);
    const BlochParams params = problem.params();

    // The A/B profiles discretize the image-margin limit conditions; the
    // per-l tables use each coordinate's own margin.
    Classification cls = classify_bounded(pair, params, problem.budget);
    classify_compact(cls, pair, params, problem.budget, problem.thresholds);

    std::vector<LabeledProfile> selected;
    for (const auto& profile : cls.profiles) {
        if (functional == "A" && profile.label == "A") selected.push_back(profile);
        if (functional == "B" && profile.label == "B") selected.push_back(profile);
        if (functional == "per-l" && profile.label.starts_with("per_l") &&
            profile.margin == "phi_l") {
            selected.push_back(profile);
        }
    }
    if (selected.empty()) throw InputError("no profile for functional " + functional);

    if (flags.format == "json") {
        emit(flags, profiles_json(selected, problem, watch.elapsed_ms(flags.no_meta)));
    } else {
        emit(flags, profiles_csv(selected));
    }
    return kExitOk;
}

int cmd_families(double p, const CommonFlags& flags) {
    if (flags.format != "json") throw InputError("family reports are JSON");
    const SampleBudget budget = flags.budget();
    SampleBudget norm_budget = budget;
    norm_budget.base_count = std::max<size_t>(budget.base_count / 10, 2000);

    std::vector<TestFamily> grid;
    for (const TestFamilyKind kind : applicable_families(p)) {
        for (const Complex& w : default_verification_grid()) {
            if ((kind == TestFamilyKind::fw_plt1 || kind == TestFamilyKind::fw_pgt1) &&
                w == Complex{}) {
                continue;
            }
            grid.push_back({kind, 1, w, p});
        }
    }
    const FamilyNormReport report = verify_family_norms(grid, norm_budget);
    emit(flags, family_report_json(report, norm_budget));
    return report.violations == 0 ? kExitOk : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-Bloch norms and weighted composition operators on the unit polydisk"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    std::string problem_path, expression, suite_name, functional = "B";
    double p = 1.0;
    int n = 1;
    std::optional<double> verify_p;

    CommonFlags classify_flags, norm_flags, verify_flags, profile_flags, families_flags;

    auto* classify_cmd =
        app.add_subcommand("classify", "bounded/compact verdicts with evidence");
    classify_cmd->add_option("problem", problem_path, "problem JSON file")->required();
    classify_flags.attach(classify_cmd, "json");

    auto* norm_cmd = app.add_subcommand("norm", "p-Bloch norm of an expression");
    norm_cmd->add_option("expression", expression, "holomorphic expression in z1..zn")
        ->required();
    norm_cmd->add_option("--p", p, "Bloch exponent")->required();
    norm_cmd->add_option("--n", n, "dimension (default 1)");
    norm_flags.attach(norm_cmd, "json");

    auto* verify_cmd = app.add_subcommand("verify", "run a built-in verification suite");
    verify_cmd->add_option("suite", suite_name, "lemma1 | lemma3 | families | remark1")
        ->required();
    verify_cmd->add_option("--p", verify_p, "restrict lemma3 to a single exponent");
    verify_flags.attach(verify_cmd, "text");

    auto* profile_cmd = app.add_subcommand("profile", "boundary-shell profile CSV");
    profile_cmd->add_option("problem", problem_path, "problem JSON file")->required();
    profile_cmd->add_option("--functional", functional, "A | B | per-l")
        ->check(CLI::IsMember({"A", "B", "per-l"}));
    profile_flags.attach(profile_cmd, "csv");

    auto* families_cmd =
        app.add_subcommand("families", "norms and bounds of the built-in test families");
    families_cmd->add_option("--p", p, "source-space exponent (default 1)");
    families_flags.attach(families_cmd, "json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify_cmd->parsed()) return cmd_classify(problem_path, classify_flags);
        if (norm_cmd->parsed()) return cmd_norm(expression, p, n, norm_flags);
        if (verify_cmd->parsed()) return cmd_verify(suite_name, verify_p, verify_flags);
        if (profile_cmd->parsed()) return cmd_profile(problem_path, functional, profile_flags);
        if (families_cmd->parsed()) return cmd_families(p, families_flags);
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (e.witness()) {
            std::cerr << "  witness: [";
            for (size_t k = 0; k < e.witness()->coords.size(); ++k) {
                const auto& c = e.witness()->coords[k];
                std::cerr << (k ? ", " : "") << "(" << c.real() << "," << c.imag() << ")";
            }
            std::cerr << "]\n";
        }
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
