// Serial reference kernels against their OpenMP counterparts.
//   ./qkm_bench --benchmark_filter=gate
// Thread count follows OMP_NUM_THREADS.

#include "qkm/qkernel.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qkm;

namespace {

std::vector<cplx> random_amps(int spins)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<cplx> a(std::size_t{1} << spins);
    for (auto& v : a) {
        v = {g(rng), g(rng)};
    }
    return a;
}

template <void (*Gate)(std::span<cplx>, int, int, double)>
void gate(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    auto amps = random_amps(n);
    for (auto _ : state) {
        Gate(amps, 0, n - 1, 1e-3);
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <void (*Rot)(std::span<cplx>, int, double)>
void z_rotation(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    auto amps = random_amps(n);
    for (auto _ : state) {
        Rot(amps, n, 1e-3);
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <cplx (*Dot)(std::span<const cplx>, std::span<const cplx>)>
void inner(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto a = random_amps(n);
    const auto b = random_amps(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Dot(a, b));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}

void gram_1d(benchmark::State& state)
{
    const Exec exec = state.range(0) ? Exec::parallel : Exec::serial;
    const SpinSystem sys = draw_couplings(10, 1);
    const EncodingParams p = EncodingParams::from_dt(0.06, kDefaultTrotterDt, 1);
    std::vector<DataPoint> pts;
    for (int i = 0; i < 16; ++i) {
        pts.push_back(DataPoint{-0.7 + 0.1 * i});
    }
    GramOptions opt;
    opt.exec = exec;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gram(sys, p, pts, opt).entries.data());
    }
    state.SetLabel(exec == Exec::parallel ? "omp" : "serial");
}

} // namespace

BENCHMARK(gate<kernels::dq_gate_serial>)->Name("gate/serial")->DenseRange(10, 20, 5);
BENCHMARK(gate<kernels::dq_gate_omp>)->Name("gate/omp")->DenseRange(10, 20, 5);
BENCHMARK(z_rotation<kernels::collective_z_serial>)->Name("z/serial")->DenseRange(10, 20, 5);
BENCHMARK(z_rotation<kernels::collective_z_omp>)->Name("z/omp")->DenseRange(10, 20, 5);
BENCHMARK(inner<kernels::inner_product_serial>)->Name("inner/serial")->DenseRange(10, 20, 5);
BENCHMARK(inner<kernels::inner_product_omp>)->Name("inner/omp")->DenseRange(10, 20, 5);
BENCHMARK(gram_1d)->Name("gram16_n10")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
