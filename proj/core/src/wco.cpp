#include "blochlab/wco.hpp"

#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace blochlab {

SymbolPair::SymbolPair(int dim, SymbolExpr psi_in, std::vector<SymbolExpr> phi_in,
                       SelfMapReport report)
    : n(dim),
      psi_expr(std::move(psi_in)),
      phi_expr(std::move(phi_in)),
      psi(psi_expr, dim),
      self_map(std::move(report)) {
    phi.reserve(phi_expr.size());
    for (const auto& e : phi_expr) phi.emplace_back(e, dim);
}

SymbolPair make_symbol_pair(SymbolExpr psi, std::vector<SymbolExpr> phi, int n,
                            std::span<const Point> validation_samples) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (static_cast<int>(phi.size()) != n) {
        throw std::invalid_argument("phi must have exactly n coordinate functions");
    }
    SelfMapReport report = validate_self_map(phi, n, validation_samples);
    if (!report.ok()) {
        std::string msg = "phi is not a self-map: |phi_" +
                          std::to_string(report.witness_coordinate) +
                          "| = " + std::to_string(report.max_modulus) + " at a sample point";
        throw EvalError(EvalError::Kind::self_map, msg, report.witness);
    }
    return SymbolPair(n, std::move(psi), std::move(phi), std::move(report));
}

PairJets pair_jets(const SymbolPair& pair, const Point& z) {
    PairJets jets;
    jets.psi = pair.psi.eval(z);
    jets.phi.reserve(pair.phi.size());
    for (size_t l = 0; l < pair.phi.size(); ++l) {
        Jet j = pair.phi[l].eval(z);
        if (!(std::abs(j.value) < 1.0)) {
            throw EvalError(EvalError::Kind::self_map,
                            "phi_" + std::to_string(l + 1) + " left the polydisk", z);
        }
        jets.phi.push_back(std::move(j));
    }
    return jets;
}

namespace {

Point image_point(const PairJets& jets) {
    std::vector<Complex> w;
    w.reserve(jets.phi.size());
    for (const auto& j : jets.phi) w.push_back(j.value);
    return Point(std::move(w));
}

Jet chain_rule(const PairJets& jets, const Jet& f_at_image, int n, bool with_value) {
    Jet out(n);
    if (with_value) out.value = jets.psi.value * f_at_image.value;
    for (int k = 0; k < n; ++k) {
        Complex inner{};
        for (size_t l = 0; l < jets.phi.size(); ++l) {
            inner += f_at_image.partials[l] * jets.phi[l].partials[static_cast<size_t>(k)];
        }
        out.partials[static_cast<size_t>(k)] =
            jets.psi.partials[static_cast<size_t>(k)] * f_at_image.value +
            jets.psi.value * inner;
    }
    return out;
}

bool psi_gradient_vanishes(const Jet& psi) {
    for (const auto& p : psi.partials) {
        if (p != Complex{}) return false;
    }
    return true;
}

double weight_q(const Complex& zk, double q) { return std::pow(1.0 - std::norm(zk), q); }

}  // namespace

Jet apply_wco(const SymbolPair& pair, const HolomorphicFunction& f, const Point& z) {
    const PairJets jets = pair_jets(pair, z);
    return chain_rule(jets, f.jet(image_point(jets)), pair.n, /*with_value=*/true);
}

HolomorphicFunction wco_function(const SymbolPair& pair, const HolomorphicFunction& f) {
    auto shared_pair = std::make_shared<SymbolPair>(pair);
    auto shared_f = std::make_shared<HolomorphicFunction>(f);
    auto full = [shared_pair, shared_f](const Point& z) {
        return apply_wco(*shared_pair, *shared_f, z);
    };
    auto partials_only = [shared_pair, shared_f](const Point& z) {
        const PairJets jets = pair_jets(*shared_pair, z);
        const Point w = image_point(jets);
        // f's value feeds the chain rule only through the dpsi term.
        const Jet fj = psi_gradient_vanishes(jets.psi) ? shared_f->partials(w)
                                                       : shared_f->jet(w);
        return chain_rule(jets, fj, shared_pair->n, /*with_value=*/false);
    };
    return HolomorphicFunction(pair.n, std::move(full), std::move(partials_only));
}

namespace {

CriterionValues criterion_values_impl(const SymbolPair& pair, const BlochParams& params,
                                      const Point& z, const PairJets& jets) {
    const Regime regime = regime_of(params.p);
    const int n = pair.n;

    std::vector<double> wq(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) wq[static_cast<size_t>(k)] = weight_q(z[k], params.q);

    std::vector<double> image_gap(jets.phi.size());  // 1 - |phi_l|^2
    for (size_t l = 0; l < jets.phi.size(); ++l) image_gap[l] = 1.0 - std::norm(jets.phi[l].value);

    double psi_grad = 0.0;  // sum_k |dpsi/dz_k| (1-|z_k|^2)^q
    for (int k = 0; k < n; ++k) {
        psi_grad += std::abs(jets.psi.partials[static_cast<size_t>(k)]) * wq[static_cast<size_t>(k)];
    }

    CriterionValues out;
    switch (regime) {
        case Regime::p_eq_1: {
            double logs = 0.0;
            for (double gap : image_gap) logs += std::log(4.0 / gap);
            out.A = psi_grad * logs;
            break;
        }
        case Regime::p_lt_1:
            out.A = psi_grad;
            break;
        case Regime::p_gt_1: {
            double sum = 0.0;
            for (double gap : image_gap) sum += std::pow(gap, 1.0 - params.p);
            out.A = psi_grad * sum;
            break;
        }
    }

    const double psi_mod = std::abs(jets.psi.value);
    out.per_l_B.resize(jets.phi.size());
    for (size_t l = 0; l < jets.phi.size(); ++l) {
        double inner = 0.0;
        for (int k = 0; k < n; ++k) {
            inner += std::abs(jets.phi[l].partials[static_cast<size_t>(k)]) *
                     wq[static_cast<size_t>(k)];
        }
        out.per_l_B[l] = psi_mod * inner / std::pow(image_gap[l], params.p);
        out.B += out.per_l_B[l];
    }
    return out;
}

}  // namespace

CriterionValues criterion_values(const SymbolPair& pair, const BlochParams& params,
                                 const Point& z) {
    return criterion_values_impl(pair, params, z, pair_jets(pair, z));
}

double psi_seminorm_integrand(const SymbolPair& pair, double q, const Point& z) {
    const Jet psi = pair.psi.eval(z);
    double sum = 0.0;
    for (int k = 0; k < pair.n; ++k) {
        sum += std::abs(psi.partials[static_cast<size_t>(k)]) * weight_q(z[k], q);
    }
    return sum;
}

const char* to_string(Boundedness b) {
    switch (b) {
        case Boundedness::bounded: return "bounded";
        case Boundedness::unbounded: return "unbounded";
        case Boundedness::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(Compactness c) {
    switch (c) {
        case Compactness::compact: return "compact";
        case Compactness::not_compact: return "not_compact";
        case Compactness::inconclusive: return "inconclusive";
    }
    return "?";
}

Classification classify_bounded(const SymbolPair& pair, const BlochParams& params,
                                const SampleBudget& budget) {
    Classification cls;
    cls.regime = regime_of(params.p);
    cls.a_sup = estimate_sup(
        [&](const Point& z) { return criterion_values(pair, params, z).A; }, pair.n, budget);
    cls.b_sup = estimate_sup(
        [&](const Point& z) { return criterion_values(pair, params, z).B; }, pair.n, budget);

    const auto a_kind = cls.a_sup.divergence.kind;
    const auto b_kind = cls.b_sup.divergence.kind;
    if (a_kind == DivergenceKind::divergent || b_kind == DivergenceKind::divergent) {
        cls.bounded = Boundedness::unbounded;
    } else if (a_kind == DivergenceKind::convergent && b_kind == DivergenceKind::convergent) {
        cls.bounded = Boundedness::bounded;
    } else {
        cls.bounded = Boundedness::inconclusive;
    }
    return cls;
}

namespace {

std::vector<const ShellRow*> populated(const std::vector<ShellRow>& rows) {
    std::vector<const ShellRow*> out;
    for (const auto& r : rows) {
        if (r.sup) out.push_back(&r);
    }
    return out;
}

// Deepest up-to-3 populated shells all under tau and non-increasing.
bool decays_to_tau(const std::vector<ShellRow>& rows, double tau) {
    const auto pop = populated(rows);
    if (pop.size() < 3) return false;
    const double a = *pop[pop.size() - 3]->sup;
    const double b = *pop[pop.size() - 2]->sup;
    const double c = *pop.back()->sup;
    return a < tau && b < tau && c < tau && a >= b && b >= c;
}

// Power-law decay: negative log-log slope with strong correlation.
bool decays_by_slope(const std::vector<ShellRow>& rows, const Thresholds& th) {
    const auto fit = shell_loglog_fit(rows, 6);
    if (!fit) {
        // All-zero deep sups have no log fit but certainly decay.
        const auto pop = populated(rows);
        if (pop.size() >= 3) {
            bool all_zero = true;
            for (const auto* r : pop) all_zero = all_zero && *r->sup == 0.0;
            if (all_zero) return true;
        }
        return false;
    }
    return fit->first <= th.decay_slope && std::abs(fit->second) >= th.decay_correlation;
}

// At least 3 populated deep shells whose deepest three sups all reach tau_big.
bool persists_above(const std::vector<ShellRow>& rows, int deep_from, double tau_big) {
    std::vector<double> deep;
    for (const auto& r : rows) {
        if (r.m > deep_from && r.sup) deep.push_back(*r.sup);
    }
    if (deep.size() < 3) return false;
    return deep[deep.size() - 3] >= tau_big && deep[deep.size() - 2] >= tau_big &&
           deep.back() >= tau_big;
}

bool any_populated_deep(const std::vector<ShellRow>& rows, int deep_from) {
    for (const auto& r : rows) {
        if (r.m > deep_from && r.count > 0) return true;
    }
    return false;
}

}  // namespace

void classify_compact(Classification& cls, const SymbolPair& pair, const BlochParams& params,
                      const SampleBudget& budget, const Thresholds& th) {
    if (cls.bounded == Boundedness::unbounded) {
        cls.compact = Compactness::not_compact;
        cls.notes.push_back("not compact: boundedness premise failed");
        return;
    }
    if (cls.bounded == Boundedness::inconclusive) {
        cls.compact = Compactness::inconclusive;
        cls.notes.push_back("compactness not judged: boundedness inconclusive");
        return;
    }

    const int M = budget.shells;
    const int deep_from = M / 2;
    const Regime regime = regime_of(params.p);
    const auto samples = sample_polydisk(pair.n, budget);
    const size_t coords = pair.phi.size();

    // One pass: pair jets drive the image margin and every profiled
    // functional, binned into image-margin shells (and, for the per-l
    // functionals, also into their own per-coordinate-margin shells).
    struct Acc {
        std::vector<double> sup;      // per profile, per shell (flattened)
        std::vector<size_t> count;
        double max_image_modulus = 0.0;
    };
    // Profiles: [0]=A, [1]=B, [2..2+n)=per_l vs image margin,
    //           [2+n..2+2n)=per_l vs own margin.
    const size_t profile_count = 2 + 2 * coords;
    const size_t stride = static_cast<size_t>(M) + 1;

    Acc init;
    init.sup.assign(profile_count * stride, 0.0);
    init.count.assign(profile_count * stride, 0);

    Acc acc = detail::parallel_range_reduce(
        samples.size(), init,
        [&](size_t begin, size_t end, Acc& a) {
            auto deposit = [&](size_t profile, std::optional<int> shell, double v) {
                if (!shell) return;
                const size_t at = profile * stride + static_cast<size_t>(*shell);
                a.sup[at] = std::max(a.sup[at], v);
                ++a.count[at];
            };
            for (size_t i = begin; i < end; ++i) {
                const Point& z = samples[i];
                const PairJets jets = pair_jets(pair, z);
                const CriterionValues cv = criterion_values_impl(pair, params, z, jets);
                double max_mod = 0.0;
                for (const auto& j : jets.phi) max_mod = std::max(max_mod, std::abs(j.value));
                a.max_image_modulus = std::max(a.max_image_modulus, max_mod);
                const auto image_shell = shell_of_margin(1.0 - max_mod, M);
                deposit(0, image_shell, cv.A);
                deposit(1, image_shell, cv.B);
                for (size_t l = 0; l < coords; ++l) {
                    deposit(2 + l, image_shell, cv.per_l_B[l]);
                    const double own_margin = 1.0 - std::abs(jets.phi[l].value);
                    deposit(2 + coords + l, shell_of_margin(own_margin, M), cv.per_l_B[l]);
                }
            }
        },
        [&](Acc& out, const Acc& in) {
            out.max_image_modulus = std::max(out.max_image_modulus, in.max_image_modulus);
            for (size_t i = 0; i < out.sup.size(); ++i) {
                out.sup[i] = std::max(out.sup[i], in.sup[i]);
                out.count[i] += in.count[i];
            }
        });

    cls.max_image_modulus = acc.max_image_modulus;
    auto rows_of = [&](size_t profile) {
        std::vector<ShellRow> rows;
        rows.reserve(static_cast<size_t>(M));
        for (int m = 1; m <= M; ++m) {
            ShellRow row;
            row.m = m;
            row.delta_high = std::ldexp(1.0, -m);
            row.delta_low = 0.5 * row.delta_high;
            row.count = acc.count[profile * stride + static_cast<size_t>(m)];
            if (row.count > 0) row.sup = acc.sup[profile * stride + static_cast<size_t>(m)];
            rows.push_back(row);
        }
        return rows;
    };

    const auto a_rows = rows_of(0);
    const auto b_rows = rows_of(1);
    cls.profiles.push_back({"A", "image", a_rows});
    cls.profiles.push_back({"B", "image", b_rows});
    std::vector<std::vector<ShellRow>> per_l_image, per_l_own;
    for (size_t l = 0; l < coords; ++l) {
        per_l_image.push_back(rows_of(2 + l));
        per_l_own.push_back(rows_of(2 + coords + l));
        cls.profiles.push_back({"per_l:" + std::to_string(l + 1), "image", per_l_image.back()});
        cls.profiles.push_back({"per_l:" + std::to_string(l + 1), "phi_l", per_l_own.back()});
    }

    // The sampled image never reached the deep shells: the boundary-approach
    // set is empty as far as sampling can tell, so boundedness already gives
    // compactness. The max sampled modulus is attached as evidence.
    if (!any_populated_deep(a_rows, deep_from)) {
        cls.compact = Compactness::compact;
        cls.notes.push_back("image compactly contained as sampled: max |phi_l| = " +
                            std::to_string(cls.max_image_modulus));
        return;
    }

    if (regime == Regime::p_eq_1 || regime == Regime::p_gt_1) {
        const bool a_persists = persists_above(a_rows, deep_from, th.tau_big);
        const bool b_persists = persists_above(b_rows, deep_from, th.tau_big);
        if (a_persists || b_persists) {
            cls.compact = Compactness::not_compact;
            cls.notes.push_back(std::string("deep-shell sup of ") +
                                (b_persists ? "B" : "A") + " stays above tau_big");
            return;
        }
        if (decays_to_tau(a_rows, th.tau) && decays_to_tau(b_rows, th.tau)) {
            cls.compact = Compactness::compact;
            return;
        }
        cls.compact = Compactness::inconclusive;
        cls.notes.push_back("boundary decay neither confirmed nor refuted at current budget");
        return;
    }

    // p < 1: every per-coordinate functional must decay as the image
    // approaches the boundary. Judged against the image margin; when the
    // per-coordinate-margin reading disagrees, that asymmetry is noted.
    bool all_decay = true;
    bool any_persist = false;
    for (size_t l = 0; l < coords; ++l) {
        const auto& rows = per_l_image[l];
        const bool decays = decays_to_tau(rows, th.tau) || decays_by_slope(rows, th);
        const bool persists = persists_above(rows, deep_from, th.tau_big) && !decays;
        if (persists) {
            any_persist = true;
            const auto& own = per_l_own[l];
            if (decays_to_tau(own, th.tau) || decays_by_slope(own, th)) {
                cls.notes.push_back(
                    "l=" + std::to_string(l + 1) +
                    ": decays against its own margin but persists as the image nears the "
                    "boundary; image-margin verdict used");
            }
        }
        all_decay = all_decay && decays;
    }
    if (any_persist) {
        cls.compact = Compactness::not_compact;
        cls.notes.push_back("a per-coordinate functional stays above tau_big in deep shells");
    } else if (all_decay) {
        cls.compact = Compactness::compact;
    } else {
        cls.compact = Compactness::inconclusive;
        cls.notes.push_back("boundary decay neither confirmed nor refuted at current budget");
    }
}

Classification classify(const SymbolPair& pair, const BlochParams& params,
                        const SampleBudget& budget, const Thresholds& thresholds) {
    Classification cls = classify_bounded(pair, params, budget);
    classify_compact(cls, pair, params, budget, thresholds);
    return cls;
}

double sufficiency_upper_bound(const Classification& cls, double psi_norm,
                               const BlochParams& params) {
    return growth_constant(params.p, params.n) * (cls.a_sup.value + cls.b_sup.value) + psi_norm;
}

}  // namespace blochlab
