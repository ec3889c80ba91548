#include "blochlab/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "blochlab/eval.hpp"
#include "blochlab/version.hpp"

namespace blochlab {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json complex_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

json point_json(const Point& z) {
    json out = json::array();
    for (const auto& c : z.coords) out.push_back(complex_json(c));
    return out;
}

json shell_rows_json(const std::vector<ShellRow>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        json r;
        r["m"] = row.m;
        r["delta_low"] = row.delta_low;
        r["delta_high"] = row.delta_high;
        r["sup"] = row.sup ? json(*row.sup) : json(nullptr);
        r["count"] = row.count;
        out.push_back(std::move(r));
    }
    return out;
}

json divergence_json(const Divergence& d) {
    json out;
    switch (d.kind) {
        case DivergenceKind::convergent: out["kind"] = "convergent"; break;
        case DivergenceKind::divergent: out["kind"] = "divergent"; break;
        case DivergenceKind::inconclusive: out["kind"] = "inconclusive"; break;
    }
    if (d.growth_exponent) out["growth_exponent"] = *d.growth_exponent;
    if (d.fit_correlation) out["fit_correlation"] = *d.fit_correlation;
    return out;
}

json sup_estimate_json(const SupEstimate& est) {
    json out;
    out["value"] = est.value;
    out["argmax"] = point_json(est.argmax);
    out["samples_used"] = est.samples_used;
    out["divergence"] = divergence_json(est.divergence);
    out["shells"] = shell_rows_json(est.shell_sups);
    return out;
}

json budget_json(const SampleBudget& b) {
    json out;
    out["samples"] = b.base_count;
    out["shells"] = b.shells;
    out["refine"] = b.refine_rounds;
    out["seed"] = b.seed;
    return out;
}

json thresholds_json(const Thresholds& t) {
    json out;
    out["tau"] = t.tau;
    out["tau_big"] = t.tau_big;
    out["decay_slope"] = t.decay_slope;
    out["decay_correlation"] = t.decay_correlation;
    out["divergence_slope"] = kDivergenceSlopeThreshold;
    out["divergence_correlation"] = kDivergenceCorrelationMin;
    out["plateau_relative"] = kPlateauRelative;
    out["regime_epsilon"] = kRegimeEpsilon;
    out["pole_guard"] = kPoleGuard;
    out["margin_floor"] = kMarginFloor;
    return out;
}

json tool_json() {
    json out;
    out["name"] = kToolName;
    out["version"] = kToolVersion;
    return out;
}

json problem_json(const ProblemSpec& p) {
    json out;
    out["n"] = p.n;
    out["p"] = p.p;
    out["q"] = p.q;
    out["psi"] = p.psi;
    out["phi"] = p.phi;
    out["budget"] = budget_json(p.budget);
    json th;
    th["tau"] = p.thresholds.tau;
    th["tau_big"] = p.thresholds.tau_big;
    out["thresholds"] = th;
    return out;
}

json family_json(const TestFamily& f) {
    json out;
    out["kind"] = to_string(f.kind);
    out["l"] = f.l;
    out["w"] = complex_json(f.w);
    out["p"] = f.p;
    return out;
}

}  // namespace

ProblemSpec load_problem_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    try {
        ProblemSpec p;
        p.n = doc.at("n").get<int>();
        p.p = doc.at("p").get<double>();
        p.q = doc.at("q").get<double>();
        p.psi = doc.at("psi").get<std::string>();
        p.phi = doc.at("phi").get<std::vector<std::string>>();
        if (doc.contains("budget")) {
            const auto& b = doc["budget"];
            if (b.contains("samples")) p.budget.base_count = b["samples"].get<size_t>();
            if (b.contains("shells")) p.budget.shells = b["shells"].get<int>();
            if (b.contains("refine")) p.budget.refine_rounds = b["refine"].get<int>();
            if (b.contains("seed")) p.budget.seed = b["seed"].get<uint64_t>();
        }
        if (doc.contains("thresholds")) {
            const auto& t = doc["thresholds"];
            if (t.contains("tau")) p.thresholds.tau = t["tau"].get<double>();
            if (t.contains("tau_big")) p.thresholds.tau_big = t["tau_big"].get<double>();
        }
        if (p.n < 1) throw InputError("n must be >= 1");
        if (!p.params().valid()) throw InputError("p and q must be finite and >= 0");
        if (static_cast<int>(p.phi.size()) != p.n) {
            throw InputError("phi must list exactly n expressions");
        }
        if (!p.budget.valid()) throw InputError("invalid budget");
        return p;
    } catch (const json::exception& e) {
        throw InputError(std::string("problem schema: ") + e.what());
    }
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_problem_json(buf.str());
}

std::string problem_to_json(const ProblemSpec& problem) { return problem_json(problem).dump(2); }

std::string classification_report_json(const ProblemSpec& problem, const SymbolPair& pair,
                                       const Classification& cls, const OpNormSweep& sweep,
                                       std::optional<double> wall_ms) {
    json out;
    out["tool"] = tool_json();
    out["seed"] = problem.budget.seed;
    out["problem"] = problem_json(problem);
    out["thresholds"] = thresholds_json(problem.thresholds);

    json self_map;
    self_map["verdict"] = pair.self_map.ok() ? "ok" : "violation";
    self_map["max_modulus"] = pair.self_map.max_modulus;
    self_map["samples"] = pair.self_map.samples;
    out["self_map"] = self_map;

    out["regime"] = regime_name(cls.regime);
    json bounded;
    bounded["verdict"] = to_string(cls.bounded);
    bounded["A"] = sup_estimate_json(cls.a_sup);
    bounded["B"] = sup_estimate_json(cls.b_sup);
    out["bounded"] = bounded;

    json compact;
    compact["verdict"] = to_string(cls.compact);
    json profiles = json::array();
    for (const auto& profile : cls.profiles) {
        json p;
        p["label"] = profile.label;
        p["margin"] = profile.margin;
        p["rows"] = shell_rows_json(profile.rows);
        profiles.push_back(std::move(p));
    }
    compact["profiles"] = profiles;
    compact["max_image_modulus"] = cls.max_image_modulus;
    compact["notes"] = cls.notes;
    out["compact"] = compact;

    json lower;
    lower["max_ratio"] = sweep.max_ratio;
    if (sweep.witness) lower["witness"] = family_json(*sweep.witness);
    json entries = json::array();
    for (const auto& e : sweep.entries) {
        json row;
        row["family"] = family_json(e.family);
        row["norm_f"] = e.norm_f;
        row["norm_wf"] = e.norm_wf;
        row["ratio"] = e.ratio;
        row["skipped"] = e.skipped;
        entries.push_back(std::move(row));
    }
    lower["entries"] = entries;
    out["lower_bounds"] = lower;

    if (wall_ms) {
        json meta;
        meta["wall_ms"] = *wall_ms;
        out["meta"] = meta;
    }
    return out.dump(2);
}

std::string norm_report_json(const std::string& expression, double p,
                             const SampleBudget& budget, const NormReport& report,
                             std::optional<double> wall_ms) {
    json out;
    out["tool"] = tool_json();
    out["expression"] = expression;
    out["p"] = p;
    out["budget"] = budget_json(budget);
    out["value_at_zero"] = report.value_at_zero;
    out["seminorm"] = sup_estimate_json(report.seminorm);
    out["divergent"] = report.divergent();
    out["norm"] = report.norm() ? json(*report.norm()) : json(nullptr);
    if (wall_ms) out["meta"]["wall_ms"] = *wall_ms;
    return out.dump(2);
}

std::string suite_report_json(const SuiteResult& suite, const SampleBudget& budget) {
    json out;
    out["tool"] = tool_json();
    out["suite"] = suite.name;
    out["budget"] = budget_json(budget);
    out["checks"] = suite.checks;
    out["violations"] = suite.violations;
    out["skipped"] = suite.skipped;
    out["max_ratio"] = suite.max_ratio;
    out["pass"] = suite.pass();
    out["details"] = suite.details;
    return out.dump(2);
}

std::string suite_report_text(const SuiteResult& suite) {
    std::ostringstream out;
    out << suite.name << ": checks=" << suite.checks << " violations=" << suite.violations
        << " skipped=" << suite.skipped << " max_ratio=" << format_double(suite.max_ratio)
        << (suite.pass() ? " PASS" : " FAIL") << "\n";
    for (const auto& d : suite.details) out << "  " << d << "\n";
    return out.str();
}

std::string family_report_json(const FamilyNormReport& report, const SampleBudget& budget) {
    json out;
    out["tool"] = tool_json();
    out["budget"] = budget_json(budget);
    out["violations"] = report.violations;
    out["uniform_constant"] = report.uniform_constant;
    json entries = json::array();
    for (const auto& e : report.entries) {
        json row;
        row["family"] = family_json(e.family);
        row["value_at_zero"] = e.report.value_at_zero;
        row["seminorm"] = e.report.seminorm.value;
        row["norm"] = e.report.norm() ? json(*e.report.norm()) : json(nullptr);
        row["divergent"] = e.report.divergent();
        if (e.bound) row["bound"] = *e.bound;
        row["bound_ok"] = e.bound_ok;
        row["seminorm_ok"] = e.seminorm_ok;
        entries.push_back(std::move(row));
    }
    out["entries"] = entries;
    return out.dump(2);
}

std::string profile_csv(const std::vector<ShellRow>& rows) {
    std::ostringstream out;
    out << "shell_index,delta_low,delta_high,sup,count\n";
    for (const auto& row : rows) {
        out << row.m << ',' << format_double(row.delta_low) << ','
            << format_double(row.delta_high) << ','
            << (row.sup ? format_double(*row.sup) : std::string("empty")) << ',' << row.count
            << '\n';
    }
    return out.str();
}

std::string profiles_csv(const std::vector<LabeledProfile>& profiles) {
    std::ostringstream out;
    for (const auto& p : profiles) {
        out << "# " << p.label << " margin=" << p.margin << "\n" << profile_csv(p.rows);
    }
    return out.str();
}

std::string profiles_json(const std::vector<LabeledProfile>& profiles,
                          const ProblemSpec& problem, std::optional<double> wall_ms) {
    json out;
    out["tool"] = tool_json();
    out["problem"] = problem_json(problem);
    json arr = json::array();
    for (const auto& p : profiles) {
        json row;
        row["label"] = p.label;
        row["margin"] = p.margin;
        row["rows"] = shell_rows_json(p.rows);
        arr.push_back(std::move(row));
    }
    out["profiles"] = arr;
    if (wall_ms) out["meta"]["wall_ms"] = *wall_ms;
    return out.dump(2);
}

}  // namespace blochlab
