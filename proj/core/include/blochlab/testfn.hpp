#ifndef BLOCHLAB_TESTFN_HPP
#define BLOCHLAB_TESTFN_HPP

#include <string>
#include <vector>

#include "blochlab/bloch.hpp"
#include "blochlab/function.hpp"
#include "blochlab/types.hpp"
#include "blochlab/wco.hpp"

namespace blochlab {

/// Built-in single-coordinate test families. All are closed-form rational or
/// logarithmic functions of one coordinate except fw_plt1, whose value is a
/// path integral (its derivative is still closed form).
enum class TestFamilyKind {
    fw_p1,     // z_l / (1 - conj(w) z_l)
    gw_p1,     // ln(4 / (1 - conj(w) z_l))
    fw_plt1,   // int_0^{z_l} (1 - (conj(w)^2/|w|^2) t^2)^{-p} dt,    w != 0
    fw_pgt1,   // (1/conj(w)) ((1-|w|^2)/(1-conj(w)z_l)^p - 1/(1-conj(w)z_l)^{p-1})
    gw_pgt1,   // p/(1-conj(w)z_l)^{p-1} - (p-1)(1-|w|^2)/(1-conj(w)z_l)^p
    seq_c1,    // (1-|a|^2)^2/(1-z_l conj(a))^{p+1} - (1-|a|^2)/(1-z_l conj(a))^p
    seq_c2,    // z_l ((1-|a|^2)/(1-z_anchor conj(a)))^p   (anchor coordinate 1)
    seq_c3,    // (ln 4/(1-|a|^2))^{-1} (ln 4/(1-z_l conj(a)))^2
    seq_pgt1,  // (p+1)(1-|a|^2)/(1-z_l conj(a))^p - p(1-|a|^2)^2/(1-z_l conj(a))^{p+1}
    seq_t3,    // (1-|a|^2)/(1-z_l conj(a))^p
};

const char* to_string(TestFamilyKind k);

struct TestFamily {
    TestFamilyKind kind = TestFamilyKind::fw_p1;
    int l = 1;            // acting coordinate, 1-based
    Complex w{};          // parameter w (or the sequence point a), |w| < 1
    double p = 1.0;       // exponent where the family uses one
};

/// Builds the jet evaluator. fw_plt1 integrates along the straight segment
/// [0, z_l] with composite 32-node Gauss-Legendre panels (4 panels, doubled
/// for |z_l| > 0.9); its partial is the closed-form integrand at z_l.
HolomorphicFunction make_test_function(const TestFamily& family, int n);

/// Which families serve as necessity witnesses for a source exponent p.
std::vector<TestFamilyKind> applicable_families(double p);

/// The norm bound the construction promises, when it states one:
///   fw_p1  at p=1:  4/(1-|w|^2)          gw_p1 at p=1: 2 + ln 4
///   seq_t3 (p<1):   1 + 2^{p+1} p
/// fw_plt1 instead pins its seminorm to 1 (checked separately).
std::optional<double> family_norm_bound(const TestFamily& family);

struct FamilyNormEntry {
    TestFamily family;
    NormReport report;
    std::optional<double> bound;
    bool bound_ok = true;      // bound respected (or no bound stated)
    bool seminorm_ok = true;   // fw_plt1: seminorm within 1e-3 of 1
};

struct FamilyNormReport {
    std::vector<FamilyNormEntry> entries;
    size_t violations = 0;
    double uniform_constant = 0.0;  // max norm estimate over the grid
};

/// Estimates each family member's norm and asserts the stated bounds.
FamilyNormReport verify_family_norms(const std::vector<TestFamily>& grid,
                                     const SampleBudget& budget);

/// Parameter grid r e^{i theta} chasing the boundary the way the necessity
/// arguments do (w = phi_l(z) with |phi_l| -> 1).
std::vector<Complex> default_parameter_grid();

/// Grid for norm verification, capped at |w| = 0.95 so the families' seminorm
/// peaks stay inside the resolved shell window.
std::vector<Complex> default_verification_grid();

struct OpNormEntry {
    TestFamily family;
    double norm_f = 0.0;     // ||f||_p estimate
    double norm_wf = 0.0;    // ||W f||_q estimate
    double ratio = 0.0;
    bool skipped = false;    // ||f||_p divergent
};

struct OpNormSweep {
    double max_ratio = 0.0;
    std::optional<TestFamily> witness;
    std::vector<OpNormEntry> entries;
};

/// max ||W_{psi,phi} f||_q / ||f||_p over the family grid: a floating-point
/// lower bound on the operator norm. Members with a divergent ||f||_p are
/// skipped.
OpNormSweep lower_bound_opnorm(const SymbolPair& pair, const BlochParams& params,
                               const std::vector<TestFamilyKind>& kinds,
                               const std::vector<Complex>& parameters,
                               const SampleBudget& budget);

}  // namespace blochlab

#endif
