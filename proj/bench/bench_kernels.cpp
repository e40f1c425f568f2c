// Serial reference loops against the OpenMP kernels on growing grids.

#include "pzx/freq_analysis.hpp"
#include "pzx/kernels.hpp"
#include "pzx/templates.hpp"

#include <benchmark/benchmark.h>

using namespace pzx;

namespace {

Execution exec_of(const benchmark::State& state) {
    return state.range(1) ? Execution::parallel : Execution::serial;
}

void set_label(benchmark::State& state) {
    state.SetLabel(state.range(1) ? "openmp" : "serial");
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FrequencyResponse(benchmark::State& state) {
    const auto tf = instantiate(default_instance(TemplateId::g6));
    const auto grid = default_grid(static_cast<std::size_t>(state.range(0)));
    std::vector<Complex> values(grid.omegas.size());
    std::vector<std::uint8_t> singular(grid.omegas.size());
    for (auto _ : state) {
        kernels::frequency_response(tf, grid.omegas, values, singular, exec_of(state));
        benchmark::DoNotOptimize(values.data());
    }
    set_label(state);
}

void BM_AnalyticStep(benchmark::State& state) {
    const auto inst = default_instance(TemplateId::g3);
    const auto grid = linear_time_grid(20.0, static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(grid.times.size());
    for (auto _ : state) {
        kernels::analytic_series(inst, InputKind::step, grid.times, out, exec_of(state));
        benchmark::DoNotOptimize(out.data());
    }
    set_label(state);
}

void BM_StehfestStep(benchmark::State& state) {
    const TransferFunction tf{Polynomial{1, 0.5}, Polynomial{1, 3, 3, 1}, 0.0};
    const auto grid = linear_time_grid(20.0, static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(grid.times.size());
    for (auto _ : state) {
        kernels::stehfest_series(tf, InputKind::step, grid.times, default_weights(), out, exec_of(state));
        benchmark::DoNotOptimize(out.data());
    }
    set_label(state);
}

void grid_sizes(benchmark::internal::Benchmark* b) {
    for (int n : {500, 5000, 50000}) {
        for (int parallel : {0, 1}) b->Args({n, parallel});
    }
}

} // namespace

BENCHMARK(BM_FrequencyResponse)->Apply(grid_sizes);
BENCHMARK(BM_AnalyticStep)->Apply(grid_sizes);
BENCHMARK(BM_StehfestStep)->Apply(grid_sizes);

BENCHMARK_MAIN();
