#ifndef BLOCHLAB_BLOCH_HPP
#define BLOCHLAB_BLOCH_HPP

#include <span>
#include <utility>

#include "blochlab/function.hpp"
#include "blochlab/sampling.hpp"
#include "blochlab/types.hpp"

namespace blochlab {

/// ||f||_p = |f(0)| + sup_z sum_k |df/dz_k(z)| (1-|z_k|^2)^p, estimated by
/// boundary-stratified supremum search. A divergent seminorm stands in for
/// "not in B^p"; no floating infinity is ever produced.
struct NormReport {
    double value_at_zero = 0.0;
    SupEstimate seminorm;

    bool divergent() const { return seminorm.divergence.kind == DivergenceKind::divergent; }
    std::optional<double> norm() const {
        if (divergent()) return std::nullopt;
        return value_at_zero + seminorm.value;
    }
    /// Estimate of |f(0)| + sup regardless of the divergence tag; for a
    /// divergent seminorm this is only the largest sampled value.
    double norm_estimate() const { return value_at_zero + seminorm.value; }
};

/// Seminorm integrand sum_k |df/dz_k(z)| (1-|z_k|^2)^p.
double bloch_integrand(const HolomorphicFunction& f, double p, const Point& z);

NormReport bloch_norm(const HolomorphicFunction& f, double p, const SampleBudget& budget);

/// Shared result shape of the pointwise lemma checks.
struct InequalityReport {
    bool applicable = true;  // false when the norm estimate is divergent
    size_t checks = 0;
    size_t violations = 0;
    double max_ratio = 0.0;  // max of lhs / rhs over all checks
    std::optional<Point> worst;
};

/// Growth-envelope coefficient C_p(z) with |f(z)| <= C_p(z) * ||f||_p:
///   p = 1:      (1/2 + 1/(2n ln 2)) * sum_l ln(4/(1-|z_l|^2))
///   0 <= p < 1: 1 + n/(1-p)
///   p > 1:      (1/n + 2^(p-1)/(p-1)) * sum_l (1-|z_l|^2)^(1-p)
double growth_envelope(double p, int n, const Point& z);

/// Regime constant of the growth envelope (the z-independent factor).
double growth_constant(double p, int n);

/// Checks |f(z)| <= C_p(z) * ||f||_p over the samples.
InequalityReport check_growth_bound(const HolomorphicFunction& f, double p,
                                    std::span<const Point> samples, const NormReport& norm);

/// Checks |f(z) - f(w)| <= 2/(1-p) * ||f||_p * sum_k |z_k - w_k|^(1-p)
/// over the pairs. Requires 0 <= p < 1.
InequalityReport check_holder(const HolomorphicFunction& f, double p,
                              std::span<const std::pair<Point, Point>> pairs,
                              const NormReport& norm);

}  // namespace blochlab

#endif
