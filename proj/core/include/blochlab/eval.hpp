#ifndef BLOCHLAB_EVAL_HPP
#define BLOCHLAB_EVAL_HPP

#include <limits>
#include <string>
#include <vector>

#include "blochlab/expr.hpp"
#include "blochlab/types.hpp"

namespace blochlab {

/// Quotient denominators with modulus below this raise EvalError::pole.
inline constexpr double kPoleGuard = 1e-14;
/// Log / real-power arguments with modulus below this raise log_branch.
inline constexpr double kLogArgFloor = 1e-300;

/// Optional evaluation telemetry: branch-risk warnings plus the worst
/// conditioning seen (useful for rejecting ill-posed random test cases).
struct EvalDiagnostics {
    std::vector<std::string> warnings;
    double min_quotient_denom = std::numeric_limits<double>::infinity();
    double min_log_arg_modulus = std::numeric_limits<double>::infinity();
    double min_log_arg_re = std::numeric_limits<double>::infinity();
};

/// An expression flattened to a postorder tape for repeated jet evaluation.
/// Propagates value and all n first partials in one forward pass with the
/// exact per-node differentiation rules (principal branch for ln and real
/// powers). Immutable after construction; eval is pure and thread-safe.
class CompiledExpr {
public:
    CompiledExpr(const SymbolExpr& expr, int n);

    int dimension() const { return n_; }
    size_t op_count() const { return tape_.size(); }

    Jet eval(const Point& z, EvalDiagnostics* diag = nullptr) const;

private:
    struct Op {
        SymbolExpr::Kind kind;
        Complex constant{};
        int var_index = 0;
        int int_exponent = 0;
        double real_exponent = 0.0;
        int a = -1, b = -1;  // tape indices of children
    };

    std::vector<Op> tape_;
    int n_;
};

/// One-shot convenience: compiles and evaluates. Hot paths should hold a
/// CompiledExpr (or a HolomorphicFunction) instead.
Jet eval_jet(const SymbolExpr& expr, const Point& z, EvalDiagnostics* diag = nullptr);

}  // namespace blochlab

#endif
