// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the team size.
#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "virial/kernels.hpp"
#include "virial/radial.hpp"

using namespace virial;

namespace {

std::vector<double> integrand(std::size_t n)
{
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i + 1) * 1e-4;
        f[i] = r * r * std::exp(-r * r);
    }
    return f;
}

double expensive(double r)
{
    return std::exp(-r) * std::cos(3.0 * r) + std::pow(r, 1.5);
}

template <bool Parallel>
void BM_simpson(benchmark::State& state)
{
    const auto f = integrand(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kernels::simpson(f, 1e-4) : kernels::simpson_serial(f, 1e-4));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_integrate_from_origin(benchmark::State& state)
{
    const auto f = integrand(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kernels::integrate_from_origin(f, 1e-4, 2.0).value
                                          : kernels::integrate_from_origin_serial(f, 1e-4, 2.0).value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_sample(benchmark::State& state)
{
    std::vector<double> out(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if (Parallel)
            kernels::sample(out, expensive, 1e-4, 1e-4);
        else
            kernels::sample_serial(out, expensive, 1e-4, 1e-4);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_solve_batch(benchmark::State& state)
{
    const auto p = ScaledPotential::power_law(1.0, 2.0);
    std::vector<SolveRequest> reqs;
    for (int n = 0; n < 3; ++n)
        for (int l = 0; l < 3; ++l) {
            const DimensionConfig d{3, l};
            reqs.push_back({p, d, n, Grid::uniform(1e-3, 14.0), 1e-10});
        }
    for (auto _ : state) benchmark::DoNotOptimize(Parallel ? solve_batch(reqs) : solve_batch_serial(reqs));
}

} // namespace

BENCHMARK(BM_simpson<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_simpson<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_integrate_from_origin<false>)->Arg(1 << 20);
BENCHMARK(BM_integrate_from_origin<true>)->Arg(1 << 20);
BENCHMARK(BM_sample<false>)->Arg(1 << 18);
BENCHMARK(BM_sample<true>)->Arg(1 << 18);
BENCHMARK(BM_solve_batch<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_batch<true>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
