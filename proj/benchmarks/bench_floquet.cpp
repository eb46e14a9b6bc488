#include <cmath>

#include <benchmark/benchmark.h>

#include "csit/floquet.hpp"

// Near the collision ceiling the coefficient is sharply peaked, which is
// where census time goes.
static void BM_MonodromyAntipode(benchmark::State& state) {
    const double r = 2 - std::pow(10.0, -static_cast<double>(state.range(0)));
    const csit::ModelParams p{r, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(csit::monodromy(csit::Equilibrium::antipode, p, csit::Period::two_pi,
                                                 csit::monodromy_options(1e-9)));
}
BENCHMARK(BM_MonodromyAntipode)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

static void BM_MonodromyOrigin(benchmark::State& state) {
    const csit::ModelParams p{1.0, 0.3};
    for (auto _ : state)
        benchmark::DoNotOptimize(csit::monodromy(csit::Equilibrium::origin, p));
}
BENCHMARK(BM_MonodromyOrigin)->Unit(benchmark::kMicrosecond);
