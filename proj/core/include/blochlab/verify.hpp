#ifndef BLOCHLAB_VERIFY_HPP
#define BLOCHLAB_VERIFY_HPP

#include <string>
#include <vector>

#include "blochlab/bloch.hpp"
#include "blochlab/rng.hpp"
#include "blochlab/sampling.hpp"
#include "blochlab/testfn.hpp"

namespace blochlab {

/// Random polynomial of total degree <= max_degree with coefficients whose
/// real and imaginary parts are uniform in [-1, 1].
SymbolExpr random_polynomial(int n, int max_degree, SplitMix64& rng);

struct SuiteResult {
    std::string name;
    size_t checks = 0;
    size_t violations = 0;
    size_t skipped = 0;       // checks ruled inapplicable (divergent norm, ...)
    double max_ratio = 0.0;   // worst lhs/rhs observed
    std::vector<std::string> details;

    bool pass() const { return violations == 0; }
};

/// Growth-bound suite: 50 random polynomials per dimension n in {1,2},
/// 1e4 check points each, exponents p in {0.5, 1, 2}; zero violations of
/// |f(z)| <= C_p(z) ||f||_p expected.
SuiteResult run_lemma1_suite(const SampleBudget& budget);

/// Hoelder suite: the same polynomial corpus, p in {0, 0.25, 0.5, 0.9},
/// 1e4 random pairs each. Restricting to other exponents is allowed as long
/// as they stay below 1.
SuiteResult run_lemma3_suite(const SampleBudget& budget,
                             const std::vector<double>& p_grid = {0.0, 0.25, 0.5, 0.9});

/// Family-bound suite: the stated norm bounds over a 32-point parameter grid
/// with |w| <= 0.95, the unit seminorm of the integral family at
/// p in {0.25, 0.5, 0.75}, and uniform constants for the sequence families.
SuiteResult run_families_suite(const SampleBudget& budget);

/// Consequence check of the boundedness conditions: for weights psi whose
/// A-functional is convergent, the plain psi-seminorm term stays pointwise
/// under A/ln 4 (p = 1 regime) and its image-margin profile decays.
SuiteResult run_remark1_suite(const SampleBudget& budget);

}  // namespace blochlab

#endif
