#include <benchmark/benchmark.h>

#include <random>

#include "bench_support.hpp"

#include "qcog/numerics.hpp"
#include "qcog/wavefield.hpp"

namespace wf = qcog::wavefield;

namespace {

wf::WaveFieldSpec solved_spec() {
    auto spec = wf::parse_spec_json(qcog_bench::spec_json());
    const auto data = qcog_bench::load_corpus();
    std::vector<double> f_values;
    for (const auto& it : data.items) {
        f_values.push_back(it.mu_ab - 0.5 * (it.mu_a + it.mu_b));
    }
    spec.phase_coeffs = wf::build_phase_field(spec, f_values).coeffs;
    return spec;
}

void BM_PhaseFieldSolve(benchmark::State& state) {
    const auto spec = wf::parse_spec_json(qcog_bench::spec_json());
    const auto data = qcog_bench::load_corpus();
    std::vector<double> f_values;
    for (const auto& it : data.items) {
        f_values.push_back(it.mu_ab - 0.5 * (it.mu_a + it.mu_b));
    }
    for (auto _ : state) {
        auto solution = wf::build_phase_field(spec, f_values);
        benchmark::DoNotOptimize(solution);
    }
}
BENCHMARK(BM_PhaseFieldSolve);

void BM_RenderSuperposition(benchmark::State& state) {
    const auto spec = solved_spec();
    const int side = static_cast<int>(state.range(0));
    const wf::GridSpec grid{side, side, spec.grid.x0, spec.grid.y0, spec.grid.x1, spec.grid.y1};
    for (auto _ : state) {
        auto raster = wf::render_intensity(spec, wf::Field::AorB, grid);
        benchmark::DoNotOptimize(raster);
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_RenderSuperposition)->Arg(64)->Arg(256)->Arg(512);

void BM_SolveDense(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    qcog::numerics::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = dist(rng);
        m.at(i, i) += 4.0;
    }
    std::vector<double> rhs(n);
    for (auto& v : rhs) v = dist(rng);
    for (auto _ : state) {
        auto x = qcog::numerics::solve_dense_linear(m, rhs);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_SolveDense)->Arg(8)->Arg(24)->Arg(48);

}  // namespace

BENCHMARK_MAIN();
