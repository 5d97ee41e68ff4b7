#include <cmath>

#include <benchmark/benchmark.h>

#include "flowlines/laplace.hpp"
#include "flowlines/newton.hpp"
#include "flowlines/presets.hpp"
#include "flowlines/spectra.hpp"
#include "flowlines/vonmises.hpp"

using namespace flowlines;

namespace {

FlowFamily wavy(int K, int n) {
    return spectra::sample_family([](double x, double s) { return s + 0.05 * std::cos(x) * s * (1 - s); }, K, n);
}

void BM_Phi(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const auto a = wavy(K, 2 * K);
    for (auto _ : state) benchmark::DoNotOptimize(vonmises::phi(a));
}
BENCHMARK(BM_Phi)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GreenPoisson(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const laplace::PoissonSolver solver(K, 2 * K);
    const auto rhs = wavy(K, 2 * K);
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(rhs, AnalyticLine(K), AnalyticLine(K)));
}
BENCHMARK(BM_GreenPoisson)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DiscretePoisson(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const auto solver = laplace::discrete_solver(K, 2 * K);
    const auto rhs = wavy(K, 2 * K);
    for (auto _ : state) benchmark::DoNotOptimize(solver->solve(rhs, AnalyticLine(K), AnalyticLine(K)));
}
BENCHMARK(BM_DiscretePoisson)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveHarmonic(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const auto p = presets::harmonic(0.05, {K, 2 * K});
    laplace::discrete_solver(K, 2 * K);
    for (auto _ : state) benchmark::DoNotOptimize(newton::solve_stationary(p));
}
BENCHMARK(BM_SolveHarmonic)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
