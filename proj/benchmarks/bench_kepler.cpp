#include <benchmark/benchmark.h>

#include "csit/kepler.hpp"

static void BM_KeplerSolve(benchmark::State& state) {
    const double e = static_cast<double>(state.range(0)) / 100;
    double M = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(csit::kepler::solve(M, e));
        M += 0.37;
        if (M > csit::two_pi)
            M -= csit::two_pi;
    }
}
BENCHMARK(BM_KeplerSolve)->Arg(0)->Arg(30)->Arg(60)->Arg(90);

static void BM_PrimaryPositions(benchmark::State& state) {
    const csit::ModelParams p{1.2, 0.3};
    double t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(csit::primary_positions(t, p));
        t += 0.01;
    }
}
BENCHMARK(BM_PrimaryPositions);
