#ifndef BLOCHLAB_FUNCTION_HPP
#define BLOCHLAB_FUNCTION_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blochlab/eval.hpp"
#include "blochlab/expr.hpp"
#include "blochlab/types.hpp"

namespace blochlab {

/// A holomorphic function on U^n exposed through its jet evaluator.
///
/// Wraps either a compiled expression or a native closed-form evaluator
/// (the built-in test families). `partials` is an optional fast path that
/// may skip work only needed for the value (e.g. quadrature); it defaults
/// to the full jet. Evaluators are pure, so instances are thread-safe.
class HolomorphicFunction {
public:
    using JetFn = std::function<Jet(const Point&)>;

    HolomorphicFunction() = default;
    HolomorphicFunction(int dimension, JetFn jet, JetFn partials_only = nullptr)
        : n_(dimension), jet_(std::move(jet)), partials_(std::move(partials_only)) {}

    int dimension() const { return n_; }
    bool valid() const { return n_ >= 1 && static_cast<bool>(jet_); }

    Jet jet(const Point& z) const { return jet_(z); }

    /// Value may be skipped by native evaluators; partials are always exact.
    Jet partials(const Point& z) const { return partials_ ? partials_(z) : jet_(z); }

private:
    int n_ = 0;
    JetFn jet_;
    JetFn partials_;
};

/// Compiles an expression into a jet-evaluable function.
HolomorphicFunction from_expression(const SymbolExpr& expr, int n);
HolomorphicFunction from_expression(const std::string& text, int n);

/// Outcome of sampling max_l |phi_l(z)| over a set of interior points.
struct SelfMapReport {
    enum class Verdict { ok, violation };
    Verdict verdict = Verdict::ok;
    double max_modulus = 0.0;
    size_t samples = 0;
    std::optional<Point> witness;   // point with |phi_l| >= 1, when violated
    int witness_coordinate = 0;     // 1-based l of the violating coordinate

    bool ok() const { return verdict == Verdict::ok; }
};

/// Checks that phi maps every sample strictly inside U^n.
/// Evaluation errors propagate with the offending sample attached.
SelfMapReport validate_self_map(std::span<const CompiledExpr> phi,
                                std::span<const Point> samples);
SelfMapReport validate_self_map(const std::vector<SymbolExpr>& phi, int n,
                                std::span<const Point> samples);

}  // namespace blochlab

#endif
