#include <benchmark/benchmark.h>

#include "blochlab/bloch.hpp"
#include "blochlab/eval.hpp"
#include "blochlab/sampling.hpp"
#include "blochlab/testfn.hpp"
#include "blochlab/verify.hpp"

namespace {

using namespace blochlab;

void JetEvalRational(benchmark::State& state) {
    const CompiledExpr expr(parse_expression("z1/(1 - 0.7*z1) + ln(4/(1 - 0.5*z1))", 1), 1);
    const Point z{Complex(0.3, 0.4)};
    for (auto _ : state) {
        Jet jet = expr.eval(z);
        benchmark::DoNotOptimize(jet);
    }
}
BENCHMARK(JetEvalRational);

void JetEvalPolynomial(benchmark::State& state) {
    SplitMix64 rng{7};
    const int n = static_cast<int>(state.range(0));
    const CompiledExpr expr(random_polynomial(n, 4, rng), n);
    const Point z(std::vector<Complex>(static_cast<size_t>(n), Complex(0.4, 0.2)));
    for (auto _ : state) {
        Jet jet = expr.eval(z);
        benchmark::DoNotOptimize(jet);
    }
}
BENCHMARK(JetEvalPolynomial)->Arg(1)->Arg(2)->Arg(3);

void FamilyJet(benchmark::State& state) {
    const HolomorphicFunction f =
        make_test_function({TestFamilyKind::fw_plt1, 1, Complex(0.7, 0.1), 0.5}, 1);
    const Point z{Complex(0.5, 0.3)};
    for (auto _ : state) {
        Jet jet = f.jet(z);
        benchmark::DoNotOptimize(jet);
    }
}
BENCHMARK(FamilyJet);

void SamplePolydisk(benchmark::State& state) {
    SampleBudget budget;
    budget.base_count = static_cast<size_t>(state.range(0));
    for (auto _ : state) {
        auto points = sample_polydisk(2, budget);
        benchmark::DoNotOptimize(points);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(SamplePolydisk)->Arg(1 << 12)->Arg(1 << 15);

void EstimateSupWeighted(benchmark::State& state) {
    SampleBudget budget;
    budget.base_count = static_cast<size_t>(state.range(0));
    budget.refine_rounds = 2;
    for (auto _ : state) {
        auto est = estimate_sup(
            [](const Point& z) { return (1.0 - std::norm(z[0])) * std::abs(z[0]); }, 1, budget);
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(EstimateSupWeighted)->Arg(1 << 12)->Arg(1 << 15);

void BlochNormFamily(benchmark::State& state) {
    const HolomorphicFunction f =
        make_test_function({TestFamilyKind::fw_p1, 1, Complex(0.9, 0.0), 1.0}, 1);
    SampleBudget budget;
    budget.base_count = 1 << 14;
    for (auto _ : state) {
        auto report = bloch_norm(f, 1.0, budget);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BlochNormFamily);

}  // namespace

BENCHMARK_MAIN();
