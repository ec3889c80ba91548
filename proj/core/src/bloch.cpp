#include "blochlab/bloch.hpp"

#include <cmath>

#include "parallel.hpp"

namespace blochlab {

namespace {

double margin_weight(const Complex& zk, double p) {
    return std::pow(1.0 - std::norm(zk), p);
}

constexpr double kViolationSlack = 1e-12;

struct RatioAcc {
    size_t checks = 0;
    size_t violations = 0;
    double max_ratio = 0.0;
    std::optional<Point> worst;

    void consider(double lhs, double rhs, const Point& where) {
        ++checks;
        double ratio;
        if (rhs > 0.0) {
            ratio = lhs / rhs;
        } else {
            ratio = lhs > 0.0 ? std::numeric_limits<double>::max() : 0.0;
        }
        if (ratio > max_ratio) {
            max_ratio = ratio;
            worst = where;
        }
        if (ratio > 1.0 + kViolationSlack) ++violations;
    }

    void merge(const RatioAcc& o) {
        checks += o.checks;
        violations += o.violations;
        if (o.max_ratio > max_ratio) {
            max_ratio = o.max_ratio;
            worst = o.worst;
        }
    }
};

InequalityReport to_report(const RatioAcc& acc) {
    InequalityReport rep;
    rep.checks = acc.checks;
    rep.violations = acc.violations;
    rep.max_ratio = acc.max_ratio;
    rep.worst = acc.worst;
    return rep;
}

}  // namespace

double bloch_integrand(const HolomorphicFunction& f, double p, const Point& z) {
    const Jet jet = f.partials(z);
    double sum = 0.0;
    for (int k = 0; k < jet.dimension(); ++k) {
        sum += std::abs(jet.partials[static_cast<size_t>(k)]) * margin_weight(z[k], p);
    }
    return sum;
}

NormReport bloch_norm(const HolomorphicFunction& f, double p, const SampleBudget& budget) {
    if (!f.valid()) throw std::invalid_argument("invalid function");
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("p must be finite and >= 0");
    NormReport report;
    const Point origin(std::vector<Complex>(static_cast<size_t>(f.dimension()), Complex{}));
    report.value_at_zero = std::abs(f.jet(origin).value);
    report.seminorm = estimate_sup([&](const Point& z) { return bloch_integrand(f, p, z); },
                                   f.dimension(), budget);
    return report;
}

double growth_constant(double p, int n) {
    switch (regime_of(p)) {
        case Regime::p_eq_1:
            return 0.5 + 1.0 / (2.0 * n * std::log(2.0));
        case Regime::p_lt_1:
            return 1.0 + n / (1.0 - p);
        case Regime::p_gt_1:
            return 1.0 / n + std::pow(2.0, p - 1.0) / (p - 1.0);
    }
    return 0.0;
}

double growth_envelope(double p, int n, const Point& z) {
    const double constant = growth_constant(p, n);
    switch (regime_of(p)) {
        case Regime::p_eq_1: {
            double logs = 0.0;
            for (int l = 0; l < n; ++l) logs += std::log(4.0 / (1.0 - std::norm(z[l])));
            return constant * logs;
        }
        case Regime::p_lt_1:
            return constant;
        case Regime::p_gt_1: {
            double sum = 0.0;
            for (int l = 0; l < n; ++l) sum += std::pow(1.0 - std::norm(z[l]), 1.0 - p);
            return constant * sum;
        }
    }
    return 0.0;
}

InequalityReport check_growth_bound(const HolomorphicFunction& f, double p,
                                    std::span<const Point> samples, const NormReport& norm) {
    const auto norm_value = norm.norm();
    if (!norm_value) {
        InequalityReport rep;
        rep.applicable = false;
        return rep;
    }
    const int n = f.dimension();
    RatioAcc acc = detail::parallel_range_reduce(
        samples.size(), RatioAcc{},
        [&](size_t begin, size_t end, RatioAcc& a) {
            for (size_t i = begin; i < end; ++i) {
                const Point& z = samples[i];
                const double lhs = std::abs(f.jet(z).value);
                const double rhs = growth_envelope(p, n, z) * *norm_value;
                a.consider(lhs, rhs, z);
            }
        },
        [](RatioAcc& out, const RatioAcc& in) { out.merge(in); });
    return to_report(acc);
}

InequalityReport check_holder(const HolomorphicFunction& f, double p,
                              std::span<const std::pair<Point, Point>> pairs,
                              const NormReport& norm) {
    if (!(p >= 0.0) || p >= 1.0) {
        throw std::invalid_argument("the Hoelder estimate requires 0 <= p < 1");
    }
    const auto norm_value = norm.norm();
    if (!norm_value) {
        InequalityReport rep;
        rep.applicable = false;
        return rep;
    }
    const double factor = 2.0 / (1.0 - p) * *norm_value;
    RatioAcc acc = detail::parallel_range_reduce(
        pairs.size(), RatioAcc{},
        [&](size_t begin, size_t end, RatioAcc& a) {
            for (size_t i = begin; i < end; ++i) {
                const auto& [z, w] = pairs[i];
                const double lhs = std::abs(f.jet(z).value - f.jet(w).value);
                double gaps = 0.0;
                for (int k = 0; k < f.dimension(); ++k) {
                    gaps += std::pow(std::abs(z[k] - w[k]), 1.0 - p);
                }
                a.consider(lhs, factor * gaps, z);
            }
        },
        [](RatioAcc& out, const RatioAcc& in) { out.merge(in); });
    return to_report(acc);
}

}  // namespace blochlab
