#ifndef BLOCHLAB_REPORT_HPP
#define BLOCHLAB_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "blochlab/bloch.hpp"
#include "blochlab/sampling.hpp"
#include "blochlab/testfn.hpp"
#include "blochlab/verify.hpp"
#include "blochlab/wco.hpp"

namespace blochlab {

/// A classification problem as read from a JSON file:
/// { "n": 1, "p": 1, "q": 1, "psi": "1", "phi": ["z1"],
///   "budget": {"samples":..., "shells":..., "refine":..., "seed":...},
///   "thresholds": {"tau":..., "tau_big":...} }
/// budget and thresholds are optional and may be overridden by CLI flags.
struct ProblemSpec {
    int n = 1;
    double p = 1.0;
    double q = 1.0;
    std::string psi;
    std::vector<std::string> phi;
    SampleBudget budget;
    Thresholds thresholds;

    BlochParams params() const { return BlochParams{p, q, n}; }
};

/// Malformed input (JSON, schema, flag values). The CLI maps this to exit 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ProblemSpec load_problem_json(const std::string& json_text);
ProblemSpec load_problem_file(const std::string& path);
std::string problem_to_json(const ProblemSpec& problem);

/// Full classification report (problem echo, verdicts, sup evidence, shell
/// tables, family lower bounds, thresholds, tool version, seed). Wall time
/// is attached only when `wall_ms` is set; --no-meta passes nullopt and
/// makes reruns byte-identical.
std::string classification_report_json(const ProblemSpec& problem, const SymbolPair& pair,
                                       const Classification& cls, const OpNormSweep& sweep,
                                       std::optional<double> wall_ms);

std::string norm_report_json(const std::string& expression, double p,
                             const SampleBudget& budget, const NormReport& report,
                             std::optional<double> wall_ms);

std::string suite_report_json(const SuiteResult& suite, const SampleBudget& budget);
std::string suite_report_text(const SuiteResult& suite);

std::string family_report_json(const FamilyNormReport& report, const SampleBudget& budget);

/// CSV shell table: header "shell_index,delta_low,delta_high,sup,count";
/// empty shells carry the literal "empty" in the sup column.
std::string profile_csv(const std::vector<ShellRow>& rows);

/// Multiple labeled tables (per-l profiles): each block is preceded by a
/// "# label" comment line, with the same column schema.
std::string profiles_csv(const std::vector<LabeledProfile>& profiles);

std::string profiles_json(const std::vector<LabeledProfile>& profiles,
                          const ProblemSpec& problem, std::optional<double> wall_ms);

}  // namespace blochlab

#endif
