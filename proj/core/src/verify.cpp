#include "blochlab/verify.hpp"

#include <cmath>
#include <numbers>

#include "blochlab/eval.hpp"
#include "blochlab/wco.hpp"

namespace blochlab {

namespace {

constexpr size_t kPolynomialsPerDim = 50;
constexpr int kPolyDegree = 4;
constexpr size_t kCheckPoints = 10000;

SampleBudget norm_budget_from(const SampleBudget& budget) {
    SampleBudget b = budget;
    b.base_count = std::max<size_t>(budget.base_count / 10, 2000);
    b.refine_rounds = 2;
    return b;
}

SampleBudget check_budget_from(const SampleBudget& budget, uint64_t salt) {
    SampleBudget b = budget;
    b.base_count = kCheckPoints;
    b.refine_rounds = 0;
    b.seed = mix_seed(budget.seed, salt);
    return b;
}

void note(SuiteResult& suite, std::string line) { suite.details.push_back(std::move(line)); }

void absorb(SuiteResult& suite, const InequalityReport& rep) {
    if (!rep.applicable) {
        ++suite.skipped;
        return;
    }
    suite.checks += rep.checks;
    suite.violations += rep.violations;
    suite.max_ratio = std::max(suite.max_ratio, rep.max_ratio);
}

}  // namespace

SymbolExpr random_polynomial(int n, int max_degree, SplitMix64& rng) {
    auto coefficient = [&rng] {
        return Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    };
    auto monomial = [](int var, int degree) {
        if (degree == 1) return SymbolExpr::variable(var);
        return SymbolExpr::int_pow(SymbolExpr::variable(var), degree);
    };

    SymbolExpr sum;
    auto add_term = [&](SymbolExpr term) {
        sum = sum.empty() ? std::move(term) : SymbolExpr::add(sum, std::move(term));
    };

    if (n == 1) {
        for (int d = 0; d <= max_degree; ++d) {
            SymbolExpr term = SymbolExpr::constant(coefficient());
            if (d > 0) term = SymbolExpr::mul(term, monomial(1, d));
            add_term(std::move(term));
        }
    } else {
        for (int a = 0; a <= max_degree; ++a) {
            for (int b = 0; a + b <= max_degree; ++b) {
                SymbolExpr term = SymbolExpr::constant(coefficient());
                if (a > 0) term = SymbolExpr::mul(term, monomial(1, a));
                if (b > 0) term = SymbolExpr::mul(term, monomial(2, b));
                add_term(std::move(term));
            }
        }
    }
    return sum;
}

SuiteResult run_lemma1_suite(const SampleBudget& budget) {
    SuiteResult suite;
    suite.name = "lemma1";
    const SampleBudget norm_budget = norm_budget_from(budget);
    const std::vector<double> p_grid = {0.5, 1.0, 2.0};

    for (int n = 1; n <= 2; ++n) {
        const auto samples =
            sample_polydisk(n, check_budget_from(budget, 0x6101u + static_cast<uint64_t>(n)));
        for (size_t i = 0; i < kPolynomialsPerDim; ++i) {
            SplitMix64 rng{mix_seed(budget.seed, 0x9017, static_cast<uint64_t>(n), i)};
            const HolomorphicFunction f =
                from_expression(random_polynomial(n, kPolyDegree, rng), n);
            for (double p : p_grid) {
                const NormReport norm = bloch_norm(f, p, norm_budget);
                absorb(suite, check_growth_bound(f, p, samples, norm));
            }
        }
    }
    note(suite, "corpus: 50 random degree-<=4 polynomials per n in {1,2}, p in {0.5,1,2}");
    note(suite, "norm estimation base count: " + std::to_string(norm_budget.base_count));
    return suite;
}

SuiteResult run_lemma3_suite(const SampleBudget& budget, const std::vector<double>& p_grid) {
    for (double p : p_grid) {
        if (!(p >= 0.0) || p >= 1.0) {
            throw std::invalid_argument("the Hoelder suite requires 0 <= p < 1");
        }
    }
    SuiteResult suite;
    suite.name = "lemma3";
    const SampleBudget norm_budget = norm_budget_from(budget);

    for (int n = 1; n <= 2; ++n) {
        const auto left =
            sample_polydisk(n, check_budget_from(budget, 0x6301u + static_cast<uint64_t>(n)));
        const auto right =
            sample_polydisk(n, check_budget_from(budget, 0x6302u + static_cast<uint64_t>(n)));
        const size_t pair_count = std::min(left.size(), right.size());
        std::vector<std::pair<Point, Point>> pairs;
        pairs.reserve(pair_count);
        for (size_t i = 0; i < pair_count; ++i) pairs.emplace_back(left[i], right[i]);

        for (size_t i = 0; i < kPolynomialsPerDim; ++i) {
            SplitMix64 rng{mix_seed(budget.seed, 0x9017, static_cast<uint64_t>(n), i)};
            const HolomorphicFunction f =
                from_expression(random_polynomial(n, kPolyDegree, rng), n);
            for (double p : p_grid) {
                const NormReport norm = bloch_norm(f, p, norm_budget);
                absorb(suite, check_holder(f, p, pairs, norm));
            }
        }
    }
    note(suite, "corpus: 50 random degree-<=4 polynomials per n in {1,2}, 1e4 pairs each");
    return suite;
}

SuiteResult run_families_suite(const SampleBudget& budget) {
    SuiteResult suite;
    suite.name = "families";
    const SampleBudget norm_budget = norm_budget_from(budget);

    auto ring_grid = [](const std::vector<double>& radii, int angles) {
        std::vector<Complex> grid;
        for (double r : radii) {
            for (int j = 0; j < angles; ++j) {
                const double theta = 2.0 * std::numbers::pi * j / angles;
                grid.emplace_back(r * std::cos(theta), r * std::sin(theta));
            }
        }
        return grid;
    };
    const auto grid32 = default_verification_grid();

    std::vector<TestFamily> grid;
    for (const Complex& w : grid32) {
        grid.push_back({TestFamilyKind::fw_p1, 1, w, 1.0});
        grid.push_back({TestFamilyKind::gw_p1, 1, w, 1.0});
    }
    for (double p : {0.25, 0.5, 0.75}) {
        for (const Complex& w : ring_grid({0.5, 0.9}, 4)) {
            grid.push_back({TestFamilyKind::fw_plt1, 1, w, p});
        }
        for (const Complex& w : grid32) {
            grid.push_back({TestFamilyKind::seq_t3, 1, w, p});
        }
    }
    // Sequence/necessity families without a stated closed bound: verified to
    // have uniformly bounded norms over the grid, constant reported.
    const auto small_grid = ring_grid({0.5, 0.9, 0.95}, 4);
    for (const Complex& w : small_grid) {
        for (double p : {1.0, 2.0}) {
            grid.push_back({TestFamilyKind::seq_c1, 1, w, p});
            grid.push_back({TestFamilyKind::seq_c2, 1, w, p});
        }
        grid.push_back({TestFamilyKind::seq_c3, 1, w, 1.0});
        grid.push_back({TestFamilyKind::fw_pgt1, 1, w, 2.0});
        grid.push_back({TestFamilyKind::gw_pgt1, 1, w, 2.0});
        grid.push_back({TestFamilyKind::seq_pgt1, 1, w, 2.0});
    }

    const FamilyNormReport report = verify_family_norms(grid, norm_budget);
    suite.checks = report.entries.size();
    suite.violations = report.violations;
    for (const auto& entry : report.entries) {
        if (entry.bound && *entry.bound > 0.0) {
            suite.max_ratio =
                std::max(suite.max_ratio, entry.report.norm_estimate() / *entry.bound);
        }
        if (!entry.bound_ok || !entry.seminorm_ok) {
            note(suite, std::string("violation: ") + to_string(entry.family.kind) + " w=(" +
                            std::to_string(entry.family.w.real()) + "," +
                            std::to_string(entry.family.w.imag()) +
                            ") p=" + std::to_string(entry.family.p));
        }
    }
    note(suite, "uniform norm constant over the grid: " + std::to_string(report.uniform_constant));
    return suite;
}

SuiteResult run_remark1_suite(const SampleBudget& budget) {
    SuiteResult suite;
    suite.name = "remark1";
    const double ln4 = std::log(4.0);

    struct Entry {
        const char* psi;
        std::vector<const char*> phi;
        int n;
    };
    const std::vector<Entry> corpus = {
        {"1 - z1", {"z1"}, 1},
        {"z1", {"z1"}, 1},
        {"1 - z1^2", {"(z1+1)/2"}, 1},
        // A grows like a log here, so the sup is not judged convergent and
        // the entry exercises the inapplicable path.
        {"1 - z1*z2", {"z1", "z2"}, 2},
        {"1 - z1", {"(z1+1)/2", "z2/2"}, 2},
    };

    const Thresholds thresholds;
    for (const auto& entry : corpus) {
        const int n = entry.n;
        const BlochParams params{1.0, 1.0, n};
        SampleBudget sup_budget = budget;
        sup_budget.base_count = std::max<size_t>(budget.base_count / 10, 2000);

        std::vector<SymbolExpr> phi;
        for (const char* s : entry.phi) phi.push_back(parse_expression(s, n));
        const auto validation = sample_polydisk(n, check_budget_from(budget, 0x5e1f));
        SymbolPair pair =
            make_symbol_pair(parse_expression(entry.psi, n), std::move(phi), n, validation);

        const SupEstimate a_sup = estimate_sup(
            [&](const Point& z) { return criterion_values(pair, params, z).A; }, n, sup_budget);
        if (a_sup.divergence.kind != DivergenceKind::convergent) {
            ++suite.skipped;
            note(suite, std::string("skipped (A not convergent): psi=") + entry.psi);
            continue;
        }

        // Pointwise: each log factor exceeds ln 4, so S * ln4 <= A.
        const auto samples = sample_polydisk(n, check_budget_from(budget, 0x5e2f));
        for (const Point& z : samples) {
            const double S = psi_seminorm_integrand(pair, params.q, z);
            const double A = criterion_values(pair, params, z).A;
            ++suite.checks;
            if (S * ln4 > A * (1.0 + 1e-12)) ++suite.violations;
            if (A > 0.0) suite.max_ratio = std::max(suite.max_ratio, S * ln4 / A);
        }

        // Image-margin decay of the plain psi-seminorm term (the o(1) claim).
        auto image_margin = [&](const Point& z) {
            double max_mod = 0.0;
            for (const auto& c : pair.phi) max_mod = std::max(max_mod, std::abs(c.eval(z).value));
            return 1.0 - max_mod;
        };
        const auto rows = shell_profile_over(
            [&](const Point& z) { return psi_seminorm_integrand(pair, params.q, z); },
            image_margin, samples, budget.shells);
        const auto fit = shell_loglog_fit(rows, 6);
        bool decays = fit && fit->first <= thresholds.decay_slope &&
                      std::abs(fit->second) >= thresholds.decay_correlation;
        std::vector<double> deep;
        for (const auto& r : rows) {
            if (r.m > budget.shells / 2 && r.sup) deep.push_back(*r.sup);
        }
        const bool persists = deep.size() >= 3 && deep[deep.size() - 3] >= thresholds.tau_big &&
                              deep[deep.size() - 2] >= thresholds.tau_big &&
                              deep.back() >= thresholds.tau_big;
        ++suite.checks;
        if (persists && !decays) {
            ++suite.violations;
            note(suite, std::string("psi-seminorm does not decay toward the image boundary: ") +
                            entry.psi);
        }
    }
    note(suite, "evidence-level check: pointwise A/ln4 domination plus image-margin decay");
    return suite;
}

}  // namespace blochlab
