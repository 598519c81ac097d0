// Serial reference vs OpenMP kernels.

#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "thermo/kernels.hpp"
#include "thermo/random.hpp"

namespace k = thermo::kernels;

namespace {

template <bool Parallel>
void BM_AddLocalTerm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const k::ChainShape shape{n, 2};
    thermo::Rng rng(1);
    const thermo::CMatrix local = thermo::random_hermitian(4, rng);
    thermo::CMatrix target = thermo::CMatrix::Zero(shape.rows(), shape.rows());
    const std::vector<int> sites{n / 2, n / 2 + 1};
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::parallel::add_local_term(target, local, sites, shape);
        } else {
            k::serial::add_local_term(target, local, sites, shape);
        }
        benchmark::DoNotOptimize(target.data());
    }
}

template <bool Parallel>
void BM_WordEnergies(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const std::vector<double> energy{0.0, 0.3, -0.2, 1.0};
    const std::vector<int> allowed{1, 1, 1, 0};
    const k::WordTable table{2, 2, energy, allowed};
    for (auto _ : state) {
        auto e = Parallel ? k::parallel::word_energies(table, n, true) : k::serial::word_energies(table, n, true);
        benchmark::DoNotOptimize(e.data());
    }
}

template <bool Parallel>
void BM_TrapezoidFourier(benchmark::State& state) {
    const auto grid = static_cast<std::size_t>(state.range(0));
    std::vector<double> samples(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
        samples[j] = (1 + 0.5 * std::cos(4 * t)) * (1 + 0.5 * std::cos(16 * t)) * (1 + 0.5 * std::cos(64 * t));
    }
    for (auto _ : state) {
        auto c = Parallel ? k::parallel::trapezoid_fourier(samples, 100) : k::serial::trapezoid_fourier(samples, 100);
        benchmark::DoNotOptimize(c.data());
    }
}

}  // namespace

BENCHMARK(BM_AddLocalTerm<false>)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AddLocalTerm<true>)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WordEnergies<false>)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WordEnergies<true>)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrapezoidFourier<false>)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrapezoidFourier<true>)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
