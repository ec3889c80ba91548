#include "blochlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blochlab/rng.hpp"
#include "parallel.hpp"

namespace blochlab {

namespace {

// Shells {1..M} visited once per block of M points, in a per-(coordinate,
// block) order so coordinate depths stay decorrelated.
int stratum_shell(uint64_t seed, int coord, size_t index, int shells) {
    const size_t block = index / static_cast<size_t>(shells);
    const int slot = static_cast<int>(index % static_cast<size_t>(shells));
    std::vector<int> perm(static_cast<size_t>(shells));
    for (int m = 0; m < shells; ++m) perm[static_cast<size_t>(m)] = m + 1;
    SplitMix64 rng{mix_seed(seed, 0xA11CEULL, static_cast<uint64_t>(coord), block)};
    for (int i = shells - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next() % static_cast<uint64_t>(i + 1));
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
    }
    return perm[static_cast<size_t>(slot)];
}

Complex polar_point(double radius, double angle) {
    return Complex(radius * std::cos(angle), radius * std::sin(angle));
}

}  // namespace

std::optional<int> shell_of_margin(double margin, int max_shell) {
    if (!(margin > 0.0) || margin > 0.5) return std::nullopt;
    int exponent = 0;
    const double frac = std::frexp(margin, &exponent);  // margin = frac * 2^exponent
    int m = (frac == 0.5) ? (1 - exponent) : (-exponent);
    if (m < 1) return std::nullopt;
    return std::min(m, max_shell);
}

double domain_margin(const Point& z) { return boundary_margin(z); }

std::vector<Point> sample_polydisk(int n, const SampleBudget& budget) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!budget.valid()) throw std::invalid_argument("invalid sample budget");
    const int M = budget.shells;

    std::vector<Point> points;
    points.reserve(1 + static_cast<size_t>(n) * static_cast<size_t>(M) + budget.base_count);

    points.emplace_back(std::vector<Complex>(static_cast<size_t>(n), Complex{}));

    // Axis-aligned near-boundary rays, one per coordinate.
    for (int k = 0; k < n; ++k) {
        for (int m = 1; m <= M; ++m) {
            std::vector<Complex> c(static_cast<size_t>(n), Complex{});
            const double margin = std::max(std::ldexp(1.0, -m), kMarginFloor);
            c[static_cast<size_t>(k)] = Complex(1.0 - margin, 0.0);
            points.emplace_back(std::move(c));
        }
    }

    for (size_t i = 0; i < budget.base_count; ++i) {
        std::vector<Complex> c(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            const int m = stratum_shell(budget.seed, k, i, M);
            SplitMix64 rng{mix_seed(budget.seed, 0xBA5EULL, i, static_cast<uint64_t>(k))};
            const double hi = std::ldexp(1.0, -m);
            const double lo = 0.5 * hi;
            double margin = hi - (hi - lo) * rng.uniform01();  // in (lo, hi]
            margin = std::max(margin, kMarginFloor);
            const double angle = 2.0 * std::numbers::pi * rng.uniform01();
            c[static_cast<size_t>(k)] = polar_point(1.0 - margin, angle);
        }
        points.emplace_back(std::move(c));
    }
    return points;
}

std::vector<ShellRow> shell_profile_over(const Functional& f, const MarginFn& margin_of,
                                         const std::vector<Point>& samples, int max_shell) {
    struct Acc {
        std::vector<double> sup;
        std::vector<size_t> count;
    };
    Acc init;
    init.sup.assign(static_cast<size_t>(max_shell) + 1, 0.0);
    init.count.assign(static_cast<size_t>(max_shell) + 1, 0);

    Acc acc = detail::parallel_range_reduce(
        samples.size(), init,
        [&](size_t begin, size_t end, Acc& a) {
            for (size_t i = begin; i < end; ++i) {
                const auto shell = shell_of_margin(margin_of(samples[i]), max_shell);
                if (!shell) continue;
                const double v = f(samples[i]);
                auto& s = a.sup[static_cast<size_t>(*shell)];
                s = std::max(s, v);
                ++a.count[static_cast<size_t>(*shell)];
            }
        },
        [](Acc& out, const Acc& in) {
            for (size_t m = 0; m < out.sup.size(); ++m) {
                out.sup[m] = std::max(out.sup[m], in.sup[m]);
                out.count[m] += in.count[m];
            }
        });

    std::vector<ShellRow> rows;
    rows.reserve(static_cast<size_t>(max_shell));
    for (int m = 1; m <= max_shell; ++m) {
        ShellRow row;
        row.m = m;
        row.delta_high = std::ldexp(1.0, -m);
        row.delta_low = 0.5 * row.delta_high;
        row.count = acc.count[static_cast<size_t>(m)];
        if (row.count > 0) row.sup = acc.sup[static_cast<size_t>(m)];
        rows.push_back(row);
    }
    return rows;
}

std::vector<ShellRow> shell_profile(const Functional& f, const MarginFn& margin_of, int n,
                                    const SampleBudget& budget) {
    const auto samples = sample_polydisk(n, budget);
    return shell_profile_over(f, margin_of, samples, budget.shells);
}

std::optional<std::pair<double, double>> shell_loglog_fit(const std::vector<ShellRow>& rows,
                                                          int max_points) {
    std::vector<std::pair<double, double>> pts;  // (log 1/delta, log sup)
    for (const auto& row : rows) {
        if (!row.sup) continue;
        if (!(*row.sup > 0.0)) return std::nullopt;  // log undefined; no power law
        pts.emplace_back(-std::log(row.delta_high), std::log(*row.sup));
    }
    if (pts.size() < 3) return std::nullopt;
    if (pts.size() > static_cast<size_t>(max_points)) {
        pts.erase(pts.begin(), pts.end() - max_points);
    }
    const double count = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double vx = sxx - sx * sx / count;
    const double vy = syy - sy * sy / count;
    const double cov = sxy - sx * sy / count;
    if (!(vx > 0.0)) return std::nullopt;
    const double slope = cov / vx;
    const double corr = vy > 0.0 ? cov / std::sqrt(vx * vy) : 0.0;
    return std::make_pair(slope, corr);
}

Divergence diagnose_divergence(const std::vector<ShellRow>& rows) {
    Divergence d;
    if (const auto fit = shell_loglog_fit(rows, kFitShells)) {
        const auto [slope, corr] = *fit;
        d.fit_correlation = corr;
        if (slope >= kDivergenceSlopeThreshold && corr >= kDivergenceCorrelationMin) {
            d.kind = DivergenceKind::divergent;
            d.growth_exponent = slope;
            return d;
        }
    }
    std::vector<double> sups;
    for (const auto& row : rows) {
        if (row.sup) sups.push_back(*row.sup);
    }
    if (sups.size() >= 3) {
        const double a = sups[sups.size() - 3], b = sups[sups.size() - 2], c = sups.back();
        const double hi = std::max({a, b, c});
        const double lo = std::min({a, b, c});
        const bool plateau = (hi - lo) <= kPlateauRelative * hi || hi == 0.0;
        const bool decreasing = a >= b && b >= c;
        if (plateau || decreasing) {
            d.kind = DivergenceKind::convergent;
            return d;
        }
    }
    d.kind = DivergenceKind::inconclusive;
    return d;
}

namespace {

struct EvalMax {
    double value = -1.0;
    size_t index = SIZE_MAX;

    void consider(double v, size_t i) {
        if (v > value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
};

}  // namespace

SupEstimate estimate_sup(const Functional& f, int n, const SampleBudget& budget,
                         const MarginFn& margin_of) {
    const auto samples = sample_polydisk(n, budget);
    const int M = budget.shells;

    struct Acc {
        EvalMax best;
        std::vector<double> shell_sup;
        std::vector<size_t> shell_count;
    };
    Acc init;
    init.shell_sup.assign(static_cast<size_t>(M) + 1, 0.0);
    init.shell_count.assign(static_cast<size_t>(M) + 1, 0);

    std::vector<double> values(samples.size());
    Acc acc = detail::parallel_range_reduce(
        samples.size(), init,
        [&](size_t begin, size_t end, Acc& a) {
            for (size_t i = begin; i < end; ++i) {
                const double v = f(samples[i]);
                values[i] = v;
                a.best.consider(v, i);
                if (const auto shell = shell_of_margin(margin_of(samples[i]), M)) {
                    auto& s = a.shell_sup[static_cast<size_t>(*shell)];
                    s = std::max(s, v);
                    ++a.shell_count[static_cast<size_t>(*shell)];
                }
            }
        },
        [](Acc& out, const Acc& in) {
            out.best.consider(in.best.value, in.best.index);
            for (size_t m = 0; m < out.shell_sup.size(); ++m) {
                out.shell_sup[m] = std::max(out.shell_sup[m], in.shell_sup[m]);
                out.shell_count[m] += in.shell_count[m];
            }
        });

    SupEstimate est;
    est.samples_used = samples.size();
    est.value = acc.best.value;
    est.argmax = samples[acc.best.index];

    est.shell_sups.reserve(static_cast<size_t>(M));
    for (int m = 1; m <= M; ++m) {
        ShellRow row;
        row.m = m;
        row.delta_high = std::ldexp(1.0, -m);
        row.delta_low = 0.5 * row.delta_high;
        row.count = acc.shell_count[static_cast<size_t>(m)];
        if (row.count > 0) row.sup = acc.shell_sup[static_cast<size_t>(m)];
        est.shell_sups.push_back(row);
    }
    est.divergence = diagnose_divergence(est.shell_sups);

    // Local pattern search from the best K points of a fixed-size sample
    // prefix. Ties break toward the lower sample index, and the prefix cap
    // keeps the refined search identical when only base_count grows, so a
    // bigger budget can never lower the estimate.
    constexpr size_t kRefineSeeds = 5;
    constexpr size_t kRefineSeedPrefix = 4096;
    if (budget.refine_rounds > 0 && !samples.empty()) {
        const size_t specials =
            1 + static_cast<size_t>(n) * static_cast<size_t>(budget.shells);
        std::vector<size_t> order(std::min(samples.size(), specials + kRefineSeedPrefix));
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        const size_t seeds = std::min(kRefineSeeds, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<long>(seeds), order.end(),
                          [&](size_t a, size_t b) {
                              if (values[a] != values[b]) return values[a] > values[b];
                              return a < b;
                          });

        struct SeedState {
            Point z;
            double value;
        };
        std::vector<SeedState> walkers;
        for (size_t s = 0; s < seeds; ++s) walkers.push_back({samples[order[s]], values[order[s]]});

        double radial_frac = 0.5;
        double angular_step = std::numbers::pi / 8.0;
        for (int round = 0; round < budget.refine_rounds; ++round) {
            for (auto& w : walkers) {
                // Poll all coordinate-wise moves at this scale until none
                // improves (bounded), then the scale halves for the next round.
                for (int sweep = 0; sweep < 25; ++sweep) {
                    bool moved = false;
                    for (int k = 0; k < n; ++k) {
                        const Complex zk = w.z[k];
                        const double r = std::abs(zk);
                        const double theta = (r > 0.0) ? std::arg(zk) : 0.0;
                        const double margin = 1.0 - r;
                        const Complex candidates[4] = {
                            polar_point(std::min(1.0 - kMarginFloor, r + radial_frac * margin),
                                        theta),
                            polar_point(std::max(0.0, r - radial_frac * margin), theta),
                            polar_point(r, theta + angular_step),
                            polar_point(r, theta - angular_step),
                        };
                        for (const Complex& c : candidates) {
                            Point trial = w.z;
                            trial[k] = c;
                            const double v = f(trial);
                            ++est.samples_used;
                            if (v > w.value) {
                                w.value = v;
                                w.z = std::move(trial);
                                moved = true;
                            }
                        }
                    }
                    if (!moved) break;
                }
            }
            radial_frac *= 0.5;
            angular_step *= 0.5;
            std::stable_sort(walkers.begin(), walkers.end(),
                             [](const SeedState& a, const SeedState& b) { return a.value > b.value; });
        }
        for (const auto& w : walkers) {
            if (w.value > est.value) {
                est.value = w.value;
                est.argmax = w.z;
            }
        }
    }
    return est;
}

}  // namespace blochlab
