#ifndef BLOCHLAB_WCO_HPP
#define BLOCHLAB_WCO_HPP

#include <string>
#include <vector>

#include "blochlab/bloch.hpp"
#include "blochlab/function.hpp"
#include "blochlab/sampling.hpp"
#include "blochlab/types.hpp"

namespace blochlab {

/// The defining data of W_{psi,phi} f = psi * (f o phi), with the sampled
/// self-map evidence attached. Construct through make_symbol_pair, which
/// rejects pairs whose phi leaves the polydisk on any validation sample.
struct SymbolPair {
    int n = 0;
    SymbolExpr psi_expr;
    std::vector<SymbolExpr> phi_expr;
    CompiledExpr psi;
    std::vector<CompiledExpr> phi;
    SelfMapReport self_map;

    SymbolPair(int n, SymbolExpr psi, std::vector<SymbolExpr> phi, SelfMapReport report);
};

SymbolPair make_symbol_pair(SymbolExpr psi, std::vector<SymbolExpr> phi, int n,
                            std::span<const Point> validation_samples);

/// psi jet and all phi_l jets at one point; phi values re-checked to be
/// interior (a violation throws EvalError::self_map with the witness).
struct PairJets {
    Jet psi;
    std::vector<Jet> phi;
};
PairJets pair_jets(const SymbolPair& pair, const Point& z);

/// W_{psi,phi} f jet at z by the chain rule:
/// d(Wf)/dz_k = dpsi/dz_k f(phi) + psi * sum_l df/dw_l(phi) dphi_l/dz_k.
Jet apply_wco(const SymbolPair& pair, const HolomorphicFunction& f, const Point& z);

/// f |-> psi * (f o phi) as a jet-evaluable function. The partials fast path
/// skips f's value whenever every dpsi/dz_k vanishes at the point.
HolomorphicFunction wco_function(const SymbolPair& pair, const HolomorphicFunction& f);

/// The two regime criterion functionals at a point.
///   A: psi-derivative term   (log factor at p=1, plain at p<1, power at p>1)
///   B: phi-derivative term   |psi| sum_{k,l} |dphi_l/dz_k| (1-|z_k|^2)^q / (1-|phi_l|^2)^p
struct CriterionValues {
    double A = 0.0;
    double B = 0.0;
    std::vector<double> per_l_B;  // B = sum of per_l_B up to rounding
};

CriterionValues criterion_values(const SymbolPair& pair, const BlochParams& params,
                                 const Point& z);

/// Plain psi-seminorm integrand sum_k |dpsi/dz_k(z)| (1-|z_k|^2)^q.
double psi_seminorm_integrand(const SymbolPair& pair, double q, const Point& z);

/// Classification policy knobs; every report echoes the values used.
struct Thresholds {
    double tau = 1e-2;                // compact decay level (deepest shells)
    double tau_big = 1e-1;            // persistent level forcing NotCompact
    double decay_slope = -0.05;       // log-log slope accepted as decay (p<1)
    double decay_correlation = 0.9;   // minimum |correlation| of that fit
};

enum class Boundedness { bounded, unbounded, inconclusive };
enum class Compactness { compact, not_compact, inconclusive };

const char* to_string(Boundedness b);
const char* to_string(Compactness c);

struct LabeledProfile {
    std::string label;   // "A", "B" or "per_l:<l>"
    std::string margin;  // "image" (1 - max_l |phi_l|) or "phi_l" (1 - |phi_l|)
    std::vector<ShellRow> rows;
};

struct Classification {
    Regime regime = Regime::p_eq_1;
    Boundedness bounded = Boundedness::inconclusive;
    SupEstimate a_sup;
    SupEstimate b_sup;
    Compactness compact = Compactness::inconclusive;
    std::vector<LabeledProfile> profiles;
    double max_image_modulus = 0.0;  // max sampled max_l |phi_l(z)|
    std::vector<std::string> notes;
};

/// Boundedness from the suprema of A and B over the domain: bounded when both
/// estimates diagnose convergent, unbounded when either diverges.
Classification classify_bounded(const SymbolPair& pair, const BlochParams& params,
                                const SampleBudget& budget);

/// Compactness from boundary-shell decay of the criterion functionals, binned
/// by the image margin 1 - max_l |phi_l(z)|. For p < 1 the per-coordinate
/// functionals of the limit condition are judged individually; their
/// per-coordinate-margin profiles are reported alongside for diagnosis.
/// Requires the bounded verdict in `cls` (unbounded short-circuits to
/// NotCompact with a premise note).
void classify_compact(Classification& cls, const SymbolPair& pair, const BlochParams& params,
                      const SampleBudget& budget, const Thresholds& thresholds = {});

Classification classify(const SymbolPair& pair, const BlochParams& params,
                        const SampleBudget& budget, const Thresholds& thresholds = {});

/// C_regime * (sup A + sup B) + ||psi||_q: every test-family operator-norm
/// lower bound must stay under this when the pair is bounded.
double sufficiency_upper_bound(const Classification& cls, double psi_norm,
                               const BlochParams& params);

}  // namespace blochlab

#endif
