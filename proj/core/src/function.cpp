#include "blochlab/function.hpp"

#include <cmath>

namespace blochlab {

HolomorphicFunction from_expression(const SymbolExpr& expr, int n) {
    auto compiled = std::make_shared<CompiledExpr>(expr, n);
    return HolomorphicFunction(n, [compiled](const Point& z) { return compiled->eval(z); });
}

HolomorphicFunction from_expression(const std::string& text, int n) {
    return from_expression(parse_expression(text, n), n);
}

SelfMapReport validate_self_map(std::span<const CompiledExpr> phi,
                                std::span<const Point> samples) {
    if (samples.empty()) throw std::invalid_argument("self-map validation needs samples");
    SelfMapReport report;
    report.samples = samples.size();
    for (const Point& z : samples) {
        if (!in_polydisk(z)) {
            throw EvalError(EvalError::Kind::domain, "self-map sample outside U^n", z);
        }
        for (size_t l = 0; l < phi.size(); ++l) {
            double mod;
            try {
                mod = std::abs(phi[l].eval(z).value);
            } catch (const EvalError& e) {
                throw e.with_witness(z);
            }
            if (mod > report.max_modulus) {
                report.max_modulus = mod;
                if (mod >= 1.0 && report.verdict == SelfMapReport::Verdict::ok) {
                    report.verdict = SelfMapReport::Verdict::violation;
                    report.witness = z;
                    report.witness_coordinate = static_cast<int>(l) + 1;
                }
            }
        }
    }
    return report;
}

SelfMapReport validate_self_map(const std::vector<SymbolExpr>& phi, int n,
                                std::span<const Point> samples) {
    std::vector<CompiledExpr> compiled;
    compiled.reserve(phi.size());
    for (const auto& e : phi) compiled.emplace_back(e, n);
    return validate_self_map(std::span<const CompiledExpr>(compiled), samples);
}

}  // namespace blochlab
