#ifndef BLOCHLAB_SAMPLING_HPP
#define BLOCHLAB_SAMPLING_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "blochlab/types.hpp"

namespace blochlab {

/// Smallest boundary margin ever sampled or refined to.
inline constexpr double kMarginFloor = 1e-12;

/// Divergence policy: log-log slope and correlation needed to call a shell
/// profile divergent, the plateau tolerance for convergence, and how many of
/// the deepest shells feed the fit. Echoed in every report.
inline constexpr double kDivergenceSlopeThreshold = 0.1;
inline constexpr double kDivergenceCorrelationMin = 0.9;
inline constexpr double kPlateauRelative = 0.05;
inline constexpr int kFitShells = 6;

/// Dyadic boundary shell m covers margins in (2^-(m+1), 2^-m]; shell 1 is
/// (1/4, 1/2]. Margins above 1/2 are interior (no shell). Margins at or
/// below 2^-(M+1) are folded into the deepest tracked shell M.
struct ShellIndex {
    int m = 1;

    double delta_high() const { return std::ldexp(1.0, -m); }      // 2^-m
    double delta_low() const { return std::ldexp(1.0, -(m + 1)); } // 2^-(m+1)
};

/// Shell of a margin, or nullopt for interior margins (> 1/2).
/// `max_shell` folds deeper margins into the terminal shell.
std::optional<int> shell_of_margin(double margin, int max_shell);

enum class DivergenceKind { convergent, divergent, inconclusive };

struct Divergence {
    DivergenceKind kind = DivergenceKind::inconclusive;
    std::optional<double> growth_exponent;  // present iff divergent
    std::optional<double> fit_correlation;
};

/// A populated-or-empty shell row of a profile.
struct ShellRow {
    int m = 1;
    double delta_low = 0.0;
    double delta_high = 0.0;
    std::optional<double> sup;  // nullopt == empty shell (never zero-filled)
    size_t count = 0;
};

/// Estimated supremum of a nonnegative functional over U^n.
struct SupEstimate {
    double value = 0.0;          // max over every evaluated point
    Point argmax;
    size_t samples_used = 0;
    std::vector<ShellRow> shell_sups;
    Divergence divergence;
};

struct SampleBudget {
    size_t base_count = 200000;
    int shells = 12;        // M
    int refine_rounds = 3;
    uint64_t seed = 42;

    bool valid() const { return base_count >= 1 && shells >= 1 && refine_rounds >= 0; }
};

/// Deterministic boundary-stratified sample set on U^n.
///
/// Layout: origin first, then per coordinate the axis-aligned ray points
/// z_k = 1 - 2^-m (m = 1..M, other coordinates zero), then `base_count`
/// stratified points. Each coordinate of the stream draws its margin
/// uniformly inside a dyadic shell; shells cycle so every block of M
/// consecutive points covers all of them once per coordinate (independently
/// permuted per coordinate, so coordinate depths decorrelate). The stream is
/// prefix-stable: growing base_count only appends points.
std::vector<Point> sample_polydisk(int n, const SampleBudget& budget);

using Functional = std::function<double(const Point&)>;
using MarginFn = std::function<double(const Point&)>;

/// Margin map used when a functional's boundary behaviour is driven by the
/// sample point itself: 1 - max_k |z_k|.
double domain_margin(const Point& z);

/// Supremum estimate over the stratified sample set with local pattern-search
/// refinement from the best 5 points (coordinate-wise radial/angular steps,
/// halving each round). Shell sups are filled from the base samples binned by
/// `margin_of`; the divergence verdict comes from a least-squares power-law
/// fit of log(shell sup) against log(1/delta) over the deepest shells.
SupEstimate estimate_sup(const Functional& f, int n, const SampleBudget& budget,
                         const MarginFn& margin_of = domain_margin);

/// Per-shell sups of `f` over the base sample set, binned by `margin_of`.
/// Shells nobody hit are reported empty rather than zero.
std::vector<ShellRow> shell_profile(const Functional& f, const MarginFn& margin_of, int n,
                                    const SampleBudget& budget);
std::vector<ShellRow> shell_profile_over(const Functional& f, const MarginFn& margin_of,
                                         const std::vector<Point>& samples, int max_shell);

/// Divergence / convergence judgement from a shell profile:
/// divergent when the log-log slope over the deepest (up to 6 populated)
/// shells is >= 0.1 with correlation >= 0.9; convergent when the deepest
/// three populated sups agree within 5% or are non-increasing.
Divergence diagnose_divergence(const std::vector<ShellRow>& rows);

/// Least-squares slope of log(sup) vs log(1/delta) over the deepest
/// populated shells (at most `max_points`). Returns slope and correlation.
std::optional<std::pair<double, double>> shell_loglog_fit(const std::vector<ShellRow>& rows,
                                                          int max_points);

}  // namespace blochlab

#endif
