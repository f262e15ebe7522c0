#include <benchmark/benchmark.h>

#include "qdim/antichain.hpp"
#include "qdim/measure.hpp"
#include "qdim/pressure.hpp"
#include "qdim/quantizer.hpp"

namespace {

const qdim::ProbabilityVector kP(0.4, 0.35, 0.25);

void BM_PartitionSum(benchmark::State& state) {
    qdim::PotentialContext ctx(kP);
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qdim::partition_sum(ctx, 0.5, depth, false));
}
BENCHMARK(BM_PartitionSum)->Arg(100)->Arg(400)->Arg(1000)->Arg(2000);

void BM_SolveT0(benchmark::State& state) {
    qdim::PotentialContext ctx(kP);
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qdim::solve_t0(ctx, 2.0, depth, 1e-6).t0);
}
BENCHMARK(BM_SolveT0)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Discretize(benchmark::State& state) {
    qdim::PotentialContext ctx(kP);
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qdim::discretize(ctx, depth).size());
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(
                                qdim::count_words(static_cast<std::size_t>(depth),
                                                  qdim::Branch::A)));
}
BENCHMARK(BM_Discretize)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_QuantizationErrors(benchmark::State& state) {
    qdim::PotentialContext ctx(kP);
    const auto m = qdim::discretize(ctx, 10);
    const auto n_max = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qdim::quantization_errors(m, n_max, 2.0).back());
}
BENCHMARK(BM_QuantizationErrors)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_BuildGammaHat(benchmark::State& state) {
    qdim::PotentialContext ctx(kP);
    const double t0 = qdim::solve_t0(ctx, 2.0, 200, 1e-6).t0;
    const double eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qdim::build_gamma_hat(ctx, eps, 2.0, t0).members.size());
}
BENCHMARK(BM_BuildGammaHat)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
