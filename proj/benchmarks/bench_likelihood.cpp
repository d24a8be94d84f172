#include <benchmark/benchmark.h>

#include "mcle/acf.hpp"
#include "mcle/composite_likelihood.hpp"
#include "mcle/full_likelihood.hpp"
#include "mcle/harness/panels.hpp"
#include "mcle/simulation.hpp"
#include "mcle/tuples.hpp"

namespace {

mcle::SampleSeries sample(std::size_t n) {
    return mcle::simulate(mcle::SimPlan{mcle::harness::panel_model(mcle::Family::fou, 'B'), n, 1.0 / 12, 7});
}

void BM_ClEval(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto y = sample(n);
    const auto m = mcle::harness::panel_model(mcle::Family::fou, 'B');
    const auto q = mcle::build_default_tuples(3);
    for (auto _ : state) benchmark::DoNotOptimize(mcle::cl_eval(m, y, q));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClEval)->RangeMultiplier(2)->Range(128, 1 << 16)->Complexity(benchmark::oN);

void BM_FullLoglik(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto y = sample(n);
    const auto m = mcle::harness::panel_model(mcle::Family::fou, 'B');
    for (auto _ : state) benchmark::DoNotOptimize(mcle::full_loglik(m, y));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FullLoglik)->RangeMultiplier(2)->Range(128, 4096)->Complexity(benchmark::oNCubed);

void BM_FouAcf(benchmark::State& state) {
    const mcle::FouParams p{0.0, 0.01, 0.75, 0.1};
    double h = 0.0;
    for (auto _ : state) {
        h = h > 1e4 ? 0.0 : h + 0.37;
        benchmark::DoNotOptimize(mcle::fou_acf(p, h));
    }
}
BENCHMARK(BM_FouAcf);

void BM_SimulateFou(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const mcle::FouParams p{0.0, 0.01, 0.75, 0.1};
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(mcle::simulate_fou(p, n, 1.0 / 12, seed++));
}
BENCHMARK(BM_SimulateFou)->Arg(13140)->Arg(1 << 17);

}  // namespace

BENCHMARK_MAIN();
