#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blochlab/testfn.hpp"
#include "blochlab/wco.hpp"
#include "testutil.hpp"

using namespace blochlab;
namespace tu = blochlab::testutil;

namespace {

SampleBudget quick_budget(size_t base = 20000) {
    SampleBudget b;
    b.base_count = base;
    return b;
}

SymbolPair pair_of(const std::string& psi, const std::vector<std::string>& phi, int n) {
    std::vector<SymbolExpr> phi_exprs;
    for (const auto& s : phi) phi_exprs.push_back(parse_expression(s, n));
    const auto samples = sample_polydisk(n, quick_budget(2048));
    return make_symbol_pair(parse_expression(psi, n), std::move(phi_exprs), n, samples);
}

}  // namespace

TEST_CASE("self-map validation: contraction, dilation, Moebius shift") {
    const auto samples = sample_polydisk(1, quick_budget(4096));

    const auto ok = validate_self_map({parse_expression("z1/2", 1)}, 1, samples);
    CHECK(ok.ok());
    CHECK(ok.max_modulus <= 0.5);

    const auto bad = validate_self_map({parse_expression("2*z1", 1)}, 1, samples);
    CHECK(!bad.ok());
    REQUIRE(bad.witness.has_value());
    CHECK(std::abs(2.0 * (*bad.witness)[0]) >= 1.0);
    CHECK(bad.witness_coordinate == 1);

    // image is the disk |w - 1/2| < 1/2, inside U but reaching toward 1
    const auto shifted = validate_self_map({parse_expression("(z1+1)/2", 1)}, 1, samples);
    CHECK(shifted.ok());
    CHECK(shifted.max_modulus < 1.0);
    CHECK(shifted.max_modulus > 0.99);
}

TEST_CASE("make_symbol_pair rejects non-self-maps with a witness") {
    CHECK_THROWS_AS(pair_of("1", {"2*z1"}, 1), EvalError);
    try {
        pair_of("1", {"2*z1"}, 1);
    } catch (const EvalError& e) {
        CHECK(e.kind() == EvalError::Kind::self_map);
        CHECK(e.witness().has_value());
    }
}

TEST_CASE("identity operator reproduces the jet") {
    const SymbolPair pair = pair_of("1", {"z1"}, 1);
    const HolomorphicFunction f = from_expression("z1/(1 - 0.5*z1) + z1^3", 1);
    SplitMix64 rng{11};
    for (int i = 0; i < 10; ++i) {
        const Point z = tu::random_point(rng, 1);
        const Jet direct = f.jet(z);
        const Jet through = apply_wco(pair, f, z);
        CHECK(std::abs(direct.value - through.value) < 1e-15);
        CHECK(std::abs(direct.partials[0] - through.partials[0]) < 1e-15);
    }
}

TEST_CASE("multiplication by the coordinate") {
    const SymbolPair pair = pair_of("z1", {"z1"}, 1);
    const HolomorphicFunction one = from_expression("1", 1);
    const Point z{Complex(0.3, 0.1)};
    const Jet jet = apply_wco(pair, one, z);
    CHECK(jet.value == Complex(0.3, 0.1));
    CHECK(jet.partials[0] == Complex(1.0, 0.0));
}

TEST_CASE("composition with the square agrees with the composed expression") {
    const SymbolPair pair = pair_of("1", {"z1^2"}, 1);
    const HolomorphicFunction coordinate = from_expression("z1", 1);
    const CompiledExpr composed(parse_expression("z1^2", 1), 1);

    const Point half{Complex(0.5, 0.0)};
    const Jet jet = apply_wco(pair, coordinate, half);
    CHECK(std::abs(jet.value - Complex(0.25, 0.0)) < 1e-15);
    CHECK(std::abs(jet.partials[0] - Complex(1.0, 0.0)) < 1e-15);

    SplitMix64 rng{21};
    for (int i = 0; i < 10; ++i) {
        const Point z = tu::random_point(rng, 1);
        const Jet through = apply_wco(pair, coordinate, z);
        const Jet direct = composed.eval(z);
        CHECK(tu::rel_error(through.value, direct.value) < 1e-14);
        CHECK(tu::rel_error(through.partials[0], direct.partials[0]) < 1e-14);
    }
}

TEST_CASE("wco partials fast path matches the full jet") {
    const SymbolPair pair = pair_of("1 - z1", {"(z1+1)/2"}, 1);
    const HolomorphicFunction f =
        make_test_function({TestFamilyKind::fw_p1, 1, Complex(0.6, 0.2), 1.0}, 1);
    const HolomorphicFunction wf = wco_function(pair, f);
    SplitMix64 rng{31};
    for (int i = 0; i < 20; ++i) {
        const Point z = tu::random_point(rng, 1);
        const Jet full = wf.jet(z);
        const Jet fast = wf.partials(z);
        CHECK(std::abs(full.partials[0] - fast.partials[0]) < 1e-15);
    }
}

TEST_CASE("criterion values: identity pair at p = q = 1") {
    const SymbolPair pair = pair_of("1", {"z1"}, 1);
    const BlochParams params{1.0, 1.0, 1};
    SplitMix64 rng{41};
    for (int i = 0; i < 20; ++i) {
        const Point z = tu::random_point(rng, 1, 0.97);
        const CriterionValues cv = criterion_values(pair, params, z);
        CHECK(cv.A == 0.0);
        CHECK(cv.B == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(cv.per_l_B.size() == 1);
        CHECK(cv.per_l_B[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("criterion values: squaring map, hand calculus oracle") {
    const SymbolPair pair = pair_of("1", {"z1^2"}, 1);
    const BlochParams params{1.0, 1.0, 1};
    const double r = 0.6;
    // oracle by hand: B = 2r (1-r^2) / (1-r^4) = 2r/(1+r^2)
    const double by_hand = 2.0 * r / (1.0 + r * r);
    CHECK(by_hand == doctest::Approx(1.2 / 1.36).epsilon(1e-15));

    // brute-force route through the jets
    const Jet phi = eval_jet(parse_expression("z1^2", 1), Point{Complex(r, 0.0)});
    const double by_jets =
        std::abs(phi.partials[0]) * (1.0 - r * r) / (1.0 - std::norm(phi.value));

    const CriterionValues cv = criterion_values(pair, params, Point{Complex(r, 0.0)});
    CHECK(cv.B == doctest::Approx(by_hand).epsilon(1e-12));
    CHECK(cv.B == doctest::Approx(by_jets).epsilon(1e-12));
}

TEST_CASE("criterion values: mixed exponents near the boundary") {
    const SymbolPair pair = pair_of("1", {"z1"}, 1);
    const BlochParams params{1.0, 0.5, 1};
    const double r = 0.99;
    const CriterionValues cv = criterion_values(pair, params, Point{Complex(r, 0.0)});
    // direct arithmetic oracle: (1-r^2)^0.5 / (1-r^2) = (1-0.9801)^(-0.5)
    CHECK(cv.B == doctest::Approx(std::pow(1.0 - 0.9801, -0.5)).epsilon(1e-12));
    CHECK(cv.B == doctest::Approx(7.0888).epsilon(1e-4));
}

TEST_CASE("regime guard band around p = 1") {
    CHECK(regime_of(1.0) == Regime::p_eq_1);
    CHECK(regime_of(1.0 + 1e-13) == Regime::p_eq_1);
    CHECK(regime_of(1.0 - 1e-13) == Regime::p_eq_1);
    CHECK(regime_of(1.0 - 1e-11) == Regime::p_lt_1);
    CHECK(regime_of(1.0 + 1e-11) == Regime::p_gt_1);
    CHECK(regime_of(0.0) == Regime::p_lt_1);
    CHECK(regime_of(2.0) == Regime::p_gt_1);
}

TEST_CASE("unit weight kills the A functional in every regime") {
    const SymbolPair pair = pair_of("1", {"(z1+1)/2"}, 1);
    SplitMix64 rng{51};
    for (double p : {0.5, 1.0, 2.0}) {
        const BlochParams params{p, 1.0, 1};
        for (int i = 0; i < 10; ++i) {
            const CriterionValues cv = criterion_values(pair, params, tu::random_point(rng, 1));
            CHECK(cv.A == 0.0);
        }
    }
}

TEST_CASE("classify_bounded: identity is bounded with unit B") {
    const SymbolPair pair = pair_of("1", {"z1"}, 1);
    const Classification cls = classify_bounded(pair, BlochParams{1.0, 1.0, 1}, quick_budget());
    CHECK(cls.bounded == Boundedness::bounded);
    CHECK(cls.b_sup.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cls.a_sup.value == 0.0);
}

TEST_CASE("classify_bounded: shrinking target exponent diverges with exponent 1/2") {
    const SymbolPair pair = pair_of("1", {"z1"}, 1);
    const Classification cls =
        classify_bounded(pair, BlochParams{1.0, 0.5, 1}, quick_budget(50000));
    CHECK(cls.bounded == Boundedness::unbounded);
    REQUIRE(cls.b_sup.divergence.growth_exponent.has_value());
    CHECK(std::abs(*cls.b_sup.divergence.growth_exponent - 0.5) < 0.1);
}

TEST_CASE("classify_bounded: Moebius shift stays bounded with sup B near 1") {
    // radial-slice oracle: B = 2(1+u)/(3+u) along z = u e^{i0}, limit 1 at u->1
    const SymbolPair pair = pair_of("1", {"(z1+1)/2"}, 1);
    const Classification cls =
        classify_bounded(pair, BlochParams{1.0, 1.0, 1}, quick_budget(50000));
    CHECK(cls.bounded == Boundedness::bounded);
    CHECK(cls.b_sup.value > 0.999);
    CHECK(cls.b_sup.value <= 1.0 + 1e-12);
}

TEST_CASE("classify_compact: the three reference maps") {
    const BlochParams params{1.0, 1.0, 1};
    const SampleBudget budget = quick_budget(50000);

    Classification compactly_contained = classify(pair_of("1", {"z1/2"}, 1), params, budget);
    CHECK(compactly_contained.bounded == Boundedness::bounded);
    CHECK(compactly_contained.compact == Compactness::compact);
    REQUIRE(!compactly_contained.notes.empty());
    CHECK(compactly_contained.notes.front().find("compactly contained") != std::string::npos);

    Classification identity = classify(pair_of("1", {"z1"}, 1), params, budget);
    CHECK(identity.compact == Compactness::not_compact);

    Classification squared = classify(pair_of("1", {"z1^2"}, 1), params, budget);
    CHECK(squared.bounded == Boundedness::bounded);
    CHECK(squared.compact == Compactness::not_compact);
}

TEST_CASE("unbounded short-circuits compactness with a premise note") {
    const SymbolPair pair = pair_of("1", {"z1"}, 1);
    Classification cls = classify(pair, BlochParams{1.0, 0.5, 1}, quick_budget(50000));
    CHECK(cls.bounded == Boundedness::unbounded);
    CHECK(cls.compact == Compactness::not_compact);
    REQUIRE(!cls.notes.empty());
    CHECK(cls.notes.front().find("premise") != std::string::npos);
}

TEST_CASE("p<1 compactness: embedding exponents, n=1 vs n=2") {
    const SampleBudget budget = quick_budget(50000);

    Classification one = classify(pair_of("1", {"z1"}, 1), BlochParams{0.5, 1.0, 1}, budget);
    CHECK(one.bounded == Boundedness::bounded);
    CHECK(one.compact == Compactness::compact);

    Classification two =
        classify(pair_of("1", {"z1", "z2"}, 2), BlochParams{0.5, 1.0, 2}, budget);
    CHECK(two.bounded == Boundedness::bounded);
    CHECK(two.compact == Compactness::not_compact);
    bool noted_asymmetry = false;
    for (const auto& note : two.notes) {
        noted_asymmetry = noted_asymmetry || note.find("own margin") != std::string::npos;
    }
    CHECK(noted_asymmetry);
}

TEST_CASE("pointwise consequence of criterion A: psi-seminorm under A / ln 4") {
    const SymbolPair pair = pair_of("1 - z1", {"z1"}, 1);
    const BlochParams params{1.0, 1.0, 1};
    SplitMix64 rng{61};
    const double ln4 = std::log(4.0);
    for (int i = 0; i < 200; ++i) {
        const Point z = tu::random_point(rng, 1, 0.99);
        const double S = psi_seminorm_integrand(pair, params.q, z);
        const double A = criterion_values(pair, params, z).A;
        CHECK(S * ln4 <= A * (1.0 + 1e-12));
    }
}

TEST_CASE("unit-weight classification agrees with the single-functional reduction") {
    const SampleBudget budget = quick_budget(30000);
    struct Entry {
        const char* phi;
        double p, q;
    };
    const Entry entries[] = {
        {"z1", 1.0, 1.0}, {"z1/2", 1.0, 1.0}, {"z1^2", 1.0, 1.0},
        {"z1", 1.0, 0.5}, {"z1", 0.5, 1.0},
    };
    for (const auto& entry : entries) {
        CAPTURE(entry.phi);
        const SymbolPair pair = pair_of("1", {entry.phi}, 1);
        const BlochParams params{entry.p, entry.q, 1};
        const Classification cls = classify_bounded(pair, params, budget);

        // direct single functional sum_{k,l} |dphi_l/dz_k| (1-|z_k|^2)^q/(1-|phi_l|^2)^p
        const auto direct = estimate_sup(
            [&](const Point& z) {
                const Jet phi = pair.phi[0].eval(z);
                return std::abs(phi.partials[0]) * std::pow(1.0 - std::norm(z[0]), params.q) /
                       std::pow(1.0 - std::norm(phi.value), params.p);
            },
            1, budget);
        const bool direct_bounded = direct.divergence.kind == DivergenceKind::convergent;
        const bool cls_bounded = cls.bounded == Boundedness::bounded;
        CHECK(direct_bounded == cls_bounded);
        CHECK(cls.b_sup.value == doctest::Approx(direct.value).epsilon(1e-12));
    }
}

TEST_CASE("compact verdicts always come with a bounded verdict") {
    const SampleBudget budget = quick_budget(20000);
    const std::vector<std::pair<const char*, BlochParams>> corpus = {
        {"z1/2", {1.0, 1.0, 1}}, {"z1", {1.0, 1.0, 1}},   {"z1^2", {1.0, 1.0, 1}},
        {"z1", {1.0, 0.5, 1}},   {"(z1+1)/2", {1.0, 1.0, 1}}, {"z1", {0.5, 1.0, 1}},
    };
    for (const auto& [phi, params] : corpus) {
        const Classification cls = classify(pair_of("1", {phi}, 1), params, budget);
        if (cls.compact == Compactness::compact) {
            CHECK(cls.bounded == Boundedness::bounded);
        }
    }
}
