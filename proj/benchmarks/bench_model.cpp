#include <benchmark/benchmark.h>

#include "csit/model.hpp"

static void BM_TangentialForce(benchmark::State& state) {
    const csit::ModelParams p{1.2, 0.3};
    double t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(csit::tangential_force(0.7, t, p));
        t += 0.01;
    }
}
BENCHMARK(BM_TangentialForce);

static void BM_HillCoefficient(benchmark::State& state) {
    const csit::HillCoefficient a(csit::Equilibrium::antipode, {1.9, 0.0});
    double t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(a(t));
        t += 0.01;
    }
}
BENCHMARK(BM_HillCoefficient);
