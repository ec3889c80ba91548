#include "blochlab/eval.hpp"

#include <cmath>

namespace blochlab {

namespace {

using Kind = SymbolExpr::Kind;

Complex ipow(Complex v, int m) {
    Complex acc(1.0, 0.0);
    while (m > 0) {
        if (m & 1) acc *= v;
        v *= v;
        m >>= 1;
    }
    return acc;
}

Complex guarded_log(Complex w, EvalDiagnostics* diag) {
    const double mod = std::abs(w);
    if (diag) {
        diag->min_log_arg_modulus = std::min(diag->min_log_arg_modulus, mod);
        diag->min_log_arg_re = std::min(diag->min_log_arg_re, w.real());
    }
    if (mod < kLogArgFloor) {
        throw EvalError(EvalError::Kind::log_branch, "log argument too close to zero");
    }
    if (diag && w.real() < 0.0 && std::abs(w.imag()) <= 1e-12 * std::max(1.0, -w.real())) {
        diag->warnings.push_back("branch-risk: log argument near the negative real axis");
    }
    return std::log(w);
}

}  // namespace

CompiledExpr::CompiledExpr(const SymbolExpr& expr, int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (expr.empty()) throw std::invalid_argument("empty expression");
    if (expr.max_variable() > n) {
        throw EvalError(EvalError::Kind::domain,
                        "expression uses z" + std::to_string(expr.max_variable()) +
                            " but dimension is " + std::to_string(n));
    }
    tape_.reserve(expr.node_count());
    // Postorder flatten.
    struct Frame {
        const SymbolExpr::Node* node;
        bool expanded;
    };
    std::vector<Frame> stack{{expr.root().get(), false}};
    std::vector<std::pair<const SymbolExpr::Node*, int>> done;
    auto index_of = [&done](const SymbolExpr::Node* n) {
        for (auto it = done.rbegin(); it != done.rend(); ++it) {
            if (it->first == n) return it->second;
        }
        return -1;
    };
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (!f.expanded) {
            stack.push_back({f.node, true});
            if (f.node->rhs) stack.push_back({f.node->rhs.get(), false});
            if (f.node->lhs) stack.push_back({f.node->lhs.get(), false});
        } else {
            Op op;
            op.kind = f.node->kind;
            op.constant = f.node->constant;
            op.var_index = f.node->var_index;
            op.int_exponent = f.node->int_exponent;
            op.real_exponent = f.node->real_exponent;
            if (f.node->lhs) op.a = index_of(f.node->lhs.get());
            if (f.node->rhs) op.b = index_of(f.node->rhs.get());
            done.emplace_back(f.node, static_cast<int>(tape_.size()));
            tape_.push_back(op);
        }
    }
}

Jet CompiledExpr::eval(const Point& z, EvalDiagnostics* diag) const {
    if (z.dimension() != n_) {
        throw EvalError(EvalError::Kind::domain, "point dimension does not match expression");
    }
    const size_t width = static_cast<size_t>(n_) + 1;  // value + n partials
    std::vector<Complex> slots(tape_.size() * width);
    auto val = [&](int idx) -> Complex& { return slots[static_cast<size_t>(idx) * width]; };
    auto par = [&](int idx, int k) -> Complex& {
        return slots[static_cast<size_t>(idx) * width + 1 + static_cast<size_t>(k)];
    };

    for (size_t i = 0; i < tape_.size(); ++i) {
        const Op& op = tape_[i];
        const int self = static_cast<int>(i);
        switch (op.kind) {
            case Kind::constant:
                val(self) = op.constant;
                break;
            case Kind::variable:
                val(self) = z[op.var_index - 1];
                par(self, op.var_index - 1) = Complex(1.0, 0.0);
                break;
            case Kind::negate:
                val(self) = -val(op.a);
                for (int k = 0; k < n_; ++k) par(self, k) = -par(op.a, k);
                break;
            case Kind::add:
                val(self) = val(op.a) + val(op.b);
                for (int k = 0; k < n_; ++k) par(self, k) = par(op.a, k) + par(op.b, k);
                break;
            case Kind::sub:
                val(self) = val(op.a) - val(op.b);
                for (int k = 0; k < n_; ++k) par(self, k) = par(op.a, k) - par(op.b, k);
                break;
            case Kind::mul: {
                const Complex u = val(op.a), v = val(op.b);
                val(self) = u * v;
                for (int k = 0; k < n_; ++k) par(self, k) = u * par(op.b, k) + v * par(op.a, k);
                break;
            }
            case Kind::div: {
                const Complex u = val(op.a), v = val(op.b);
                const double dmod = std::abs(v);
                if (diag) diag->min_quotient_denom = std::min(diag->min_quotient_denom, dmod);
                if (dmod < kPoleGuard) {
                    throw EvalError(EvalError::Kind::pole,
                                    "quotient denominator modulus below pole guard", Point(z));
                }
                const Complex q = u / v;
                val(self) = q;
                for (int k = 0; k < n_; ++k) par(self, k) = (par(op.a, k) - q * par(op.b, k)) / v;
                break;
            }
            case Kind::int_pow: {
                const Complex u = val(op.a);
                const int m = op.int_exponent;
                if (m == 0) {
                    val(self) = Complex(1.0, 0.0);
                    for (int k = 0; k < n_; ++k) par(self, k) = Complex(0.0, 0.0);
                } else {
                    const Complex um1 = ipow(u, m - 1);
                    val(self) = um1 * u;
                    const Complex factor = static_cast<double>(m) * um1;
                    for (int k = 0; k < n_; ++k) par(self, k) = factor * par(op.a, k);
                }
                break;
            }
            case Kind::real_pow: {
                const Complex u = val(op.a);
                const double alpha = op.real_exponent;
                const Complex L = guarded_log(u, diag);
                val(self) = std::exp(alpha * L);
                const Complex factor = alpha * std::exp((alpha - 1.0) * L);
                for (int k = 0; k < n_; ++k) par(self, k) = factor * par(op.a, k);
                break;
            }
            case Kind::log: {
                const Complex u = val(op.a);
                val(self) = guarded_log(u, diag);
                for (int k = 0; k < n_; ++k) par(self, k) = par(op.a, k) / u;
                break;
            }
        }
    }

    const int top = static_cast<int>(tape_.size()) - 1;
    Jet out(n_);
    out.value = val(top);
    for (int k = 0; k < n_; ++k) out.partials[static_cast<size_t>(k)] = par(top, k);
    if (!all_finite(out)) {
        throw EvalError(EvalError::Kind::domain, "evaluation produced a non-finite jet", Point(z));
    }
    return out;
}

Jet eval_jet(const SymbolExpr& expr, const Point& z, EvalDiagnostics* diag) {
    return CompiledExpr(expr, z.dimension()).eval(z, diag);
}

}  // namespace blochlab
