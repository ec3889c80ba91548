#include "blochlab/testfn.hpp"

#include <cmath>
#include <numbers>

namespace blochlab {

namespace {

// --- 32-node Gauss-Legendre rule on [-1, 1] -------------------------------

struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};

GaussRule compute_gauss_legendre(int order) {
    GaussRule rule;
    rule.node.resize(static_cast<size_t>(order));
    rule.weight.resize(static_cast<size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_order(x) and its derivative.
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= order; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        rule.node[static_cast<size_t>(i)] = -x;
        rule.node[static_cast<size_t>(order - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weight[static_cast<size_t>(i)] = w;
        rule.weight[static_cast<size_t>(order - 1 - i)] = w;
    }
    return rule;
}

const GaussRule& gauss32() {
    static const GaussRule rule = compute_gauss_legendre(32);
    return rule;
}

Complex cpow(Complex base, double exponent) { return std::exp(exponent * std::log(base)); }

/// Integral of `g` along the straight segment [0, endpoint], composite
/// Gauss-Legendre with `panels` panels.
template <typename G>
Complex segment_integral(const G& g, Complex endpoint, int panels) {
    const auto& rule = gauss32();
    Complex sum{};
    const double width = 1.0 / panels;
    for (int panel = 0; panel < panels; ++panel) {
        const double mid = (panel + 0.5) * width;
        Complex local{};
        for (size_t i = 0; i < rule.node.size(); ++i) {
            const double s = mid + 0.5 * width * rule.node[i];
            local += rule.weight[i] * g(s * endpoint);
        }
        sum += local * (0.5 * width);
    }
    return sum * endpoint;
}

void require_interior_parameter(const TestFamily& f) {
    if (!(std::abs(f.w) < 1.0)) {
        throw std::invalid_argument("family parameter must satisfy |w| < 1");
    }
}

void require_nonzero_parameter(const TestFamily& f) {
    if (f.w == Complex{}) {
        throw std::invalid_argument(std::string(to_string(f.kind)) + " requires w != 0");
    }
}

}  // namespace

const char* to_string(TestFamilyKind k) {
    switch (k) {
        case TestFamilyKind::fw_p1: return "fw_p1";
        case TestFamilyKind::gw_p1: return "gw_p1";
        case TestFamilyKind::fw_plt1: return "fw_plt1";
        case TestFamilyKind::fw_pgt1: return "fw_pgt1";
        case TestFamilyKind::gw_pgt1: return "gw_pgt1";
        case TestFamilyKind::seq_c1: return "seq_c1";
        case TestFamilyKind::seq_c2: return "seq_c2";
        case TestFamilyKind::seq_c3: return "seq_c3";
        case TestFamilyKind::seq_pgt1: return "seq_pgt1";
        case TestFamilyKind::seq_t3: return "seq_t3";
    }
    return "?";
}

HolomorphicFunction make_test_function(const TestFamily& family, int n) {
    if (family.l < 1 || family.l > n) throw std::invalid_argument("coordinate l out of range");
    require_interior_parameter(family);
    const int l = family.l - 1;
    const Complex w = family.w;
    const Complex wbar = std::conj(w);
    const double p = family.p;
    const double a2 = 1.0 - std::norm(w);  // 1 - |w|^2

    auto single = [n, l](auto&& value_and_partial) {
        return [n, l, f = std::forward<decltype(value_and_partial)>(value_and_partial)](
                   const Point& z) {
            auto [v, d] = f(z[l]);
            Jet jet(n);
            jet.value = v;
            jet.partials[static_cast<size_t>(l)] = d;
            return jet;
        };
    };

    switch (family.kind) {
        case TestFamilyKind::fw_p1:
            return HolomorphicFunction(n, single([wbar](Complex u) {
                const Complex t = 1.0 - wbar * u;
                return std::pair{u / t, 1.0 / (t * t)};
            }));
        case TestFamilyKind::gw_p1:
            return HolomorphicFunction(n, single([wbar](Complex u) {
                const Complex t = 1.0 - wbar * u;
                return std::pair{std::log(4.0) - std::log(t), wbar / t};
            }));
        case TestFamilyKind::fw_plt1: {
            require_nonzero_parameter(family);
            const Complex c = (wbar * wbar) / std::norm(w);  // unimodular
            auto integrand = [c, p](Complex t) { return cpow(1.0 - c * t * t, -p); };
            auto full = [n, l, integrand](const Point& z) {
                const Complex u = z[l];
                Jet jet(n);
                if (u != Complex{}) {
                    const int panels = std::abs(u) > 0.9 ? 8 : 4;
                    jet.value = segment_integral(integrand, u, panels);
                }
                jet.partials[static_cast<size_t>(l)] = integrand(u);
                return jet;
            };
            auto partials_only = [n, l, integrand](const Point& z) {
                Jet jet(n);
                jet.partials[static_cast<size_t>(l)] = integrand(z[l]);
                return jet;
            };
            return HolomorphicFunction(n, std::move(full), std::move(partials_only));
        }
        case TestFamilyKind::fw_pgt1:
            require_nonzero_parameter(family);
            return HolomorphicFunction(n, single([wbar, a2, p](Complex u) {
                const Complex t = 1.0 - wbar * u;
                const Complex v = (a2 * cpow(t, -p) - cpow(t, -(p - 1.0))) / wbar;
                const Complex d = p * a2 * cpow(t, -(p + 1.0)) - (p - 1.0) * cpow(t, -p);
                return std::pair{v, d};
            }));
        case TestFamilyKind::gw_pgt1:
            return HolomorphicFunction(n, single([wbar, a2, p](Complex u) {
                const Complex t = 1.0 - wbar * u;
                const Complex v = p * cpow(t, -(p - 1.0)) - (p - 1.0) * a2 * cpow(t, -p);
                const Complex d =
                    p * (p - 1.0) * wbar * (cpow(t, -p) - a2 * cpow(t, -(p + 1.0)));
                return std::pair{v, d};
            }));
        case TestFamilyKind::seq_c1:
            return HolomorphicFunction(n, single([wbar, a2, p](Complex u) {
                const Complex t = 1.0 - u * wbar;
                const Complex v = a2 * a2 * cpow(t, -(p + 1.0)) - a2 * cpow(t, -p);
                const Complex d = (p + 1.0) * wbar * a2 * a2 * cpow(t, -(p + 2.0)) -
                                  p * wbar * a2 * cpow(t, -(p + 1.0));
                return std::pair{v, d};
            }));
        case TestFamilyKind::seq_c2: {
            // Anchor coordinate is z_1 (the coordinate whose image chases the
            // boundary); z_l carries the prefactor.
            return HolomorphicFunction(n, [n, l, wbar, a2, p](const Point& z) {
                const Complex t = 1.0 - z[0] * wbar;
                const Complex gp = cpow(a2 / t, p);
                Jet jet(n);
                jet.value = z[l] * gp;
                jet.partials[static_cast<size_t>(l)] += gp;
                jet.partials[0] += z[l] * p * gp * wbar / t;
                return jet;
            });
        }
        case TestFamilyKind::seq_c3: {
            const double inv = 1.0 / std::log(4.0 / a2);
            return HolomorphicFunction(n, single([wbar, inv](Complex u) {
                const Complex t = 1.0 - u * wbar;
                const Complex big = std::log(4.0) - std::log(t);
                return std::pair{inv * big * big, inv * 2.0 * big * wbar / t};
            }));
        }
        case TestFamilyKind::seq_pgt1:
            return HolomorphicFunction(n, single([wbar, a2, p](Complex u) {
                const Complex t = 1.0 - u * wbar;
                const Complex v = (p + 1.0) * a2 * cpow(t, -p) - p * a2 * a2 * cpow(t, -(p + 1.0));
                const Complex d = p * (p + 1.0) * wbar * a2 *
                                  (cpow(t, -(p + 1.0)) - a2 * cpow(t, -(p + 2.0)));
                return std::pair{v, d};
            }));
        case TestFamilyKind::seq_t3:
            return HolomorphicFunction(n, single([wbar, a2, p](Complex u) {
                const Complex t = 1.0 - u * wbar;
                return std::pair{a2 * cpow(t, -p), p * wbar * a2 * cpow(t, -(p + 1.0))};
            }));
    }
    throw std::invalid_argument("unknown test family");
}

std::vector<TestFamilyKind> applicable_families(double p) {
    switch (regime_of(p)) {
        case Regime::p_eq_1:
            return {TestFamilyKind::fw_p1, TestFamilyKind::gw_p1, TestFamilyKind::seq_c1,
                    TestFamilyKind::seq_c2, TestFamilyKind::seq_c3};
        case Regime::p_lt_1:
            return {TestFamilyKind::fw_plt1, TestFamilyKind::seq_t3};
        case Regime::p_gt_1:
            return {TestFamilyKind::fw_pgt1, TestFamilyKind::gw_pgt1, TestFamilyKind::seq_pgt1,
                    TestFamilyKind::seq_c1, TestFamilyKind::seq_c2};
    }
    return {};
}

std::optional<double> family_norm_bound(const TestFamily& family) {
    switch (family.kind) {
        case TestFamilyKind::fw_p1:
            if (regime_of(family.p) == Regime::p_eq_1) return 4.0 / (1.0 - std::norm(family.w));
            return std::nullopt;
        case TestFamilyKind::gw_p1:
            if (regime_of(family.p) == Regime::p_eq_1) return 2.0 + std::log(4.0);
            return std::nullopt;
        case TestFamilyKind::seq_t3:
            return 1.0 + std::pow(2.0, family.p + 1.0) * family.p;
        default:
            return std::nullopt;
    }
}

FamilyNormReport verify_family_norms(const std::vector<TestFamily>& grid,
                                     const SampleBudget& budget) {
    constexpr double kSeminormTolerance = 1e-3;
    FamilyNormReport report;
    report.entries.reserve(grid.size());
    for (const auto& family : grid) {
        FamilyNormEntry entry;
        entry.family = family;
        // Norms of these single-coordinate families do not depend on the
        // ambient dimension, so measure in the minimal embedding.
        const HolomorphicFunction f = make_test_function(family, family.l);
        entry.report = bloch_norm(f, family.p, budget);
        entry.bound = family_norm_bound(family);
        const double measured = entry.report.norm_estimate();
        report.uniform_constant = std::max(report.uniform_constant, measured);
        if (entry.report.divergent()) {
            entry.bound_ok = false;
        } else if (entry.bound) {
            entry.bound_ok = measured <= *entry.bound;
        }
        if (family.kind == TestFamilyKind::fw_plt1) {
            entry.seminorm_ok =
                std::abs(entry.report.seminorm.value - 1.0) <= kSeminormTolerance;
        }
        if (!entry.bound_ok || !entry.seminorm_ok) ++report.violations;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

namespace {

std::vector<Complex> ring_grid(std::initializer_list<double> radii, int angles) {
    std::vector<Complex> grid;
    for (double r : radii) {
        for (int j = 0; j < angles; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / angles;
            grid.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }
    return grid;
}

}  // namespace

std::vector<Complex> default_parameter_grid() {
    return ring_grid({0.5, 0.9, 0.99, 0.999}, 8);
}

std::vector<Complex> default_verification_grid() {
    return ring_grid({0.3, 0.6, 0.85, 0.95}, 8);
}

OpNormSweep lower_bound_opnorm(const SymbolPair& pair, const BlochParams& params,
                               const std::vector<TestFamilyKind>& kinds,
                               const std::vector<Complex>& parameters,
                               const SampleBudget& budget) {
    OpNormSweep sweep;
    for (const TestFamilyKind kind : kinds) {
        for (int l = 1; l <= params.n; ++l) {
            for (const Complex& w : parameters) {
                TestFamily family{kind, l, w, params.p};
                OpNormEntry entry;
                entry.family = family;
                const HolomorphicFunction f = make_test_function(family, params.n);
                const NormReport nf = bloch_norm(f, params.p, budget);
                entry.norm_f = nf.norm_estimate();
                if (nf.divergent() || !(entry.norm_f > 0.0)) {
                    entry.skipped = true;
                    sweep.entries.push_back(entry);
                    continue;
                }
                const NormReport nwf =
                    bloch_norm(wco_function(pair, f), params.q, budget);
                entry.norm_wf = nwf.norm_estimate();
                entry.ratio = entry.norm_wf / entry.norm_f;
                if (entry.ratio > sweep.max_ratio) {
                    sweep.max_ratio = entry.ratio;
                    sweep.witness = family;
                }
                sweep.entries.push_back(entry);
            }
        }
    }
    return sweep;
}

}  // namespace blochlab
