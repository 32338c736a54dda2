#include <benchmark/benchmark.h>

#include "bench_support.hpp"

#include "qcog/hilbert.hpp"
#include "qcog/ingest.hpp"

namespace {

void BM_ParseCorpusCsv(benchmark::State& state) {
    const std::string text = qcog_bench::corpus_csv();
    for (auto _ : state) {
        auto data = qcog::ingest::parse_probability_table(text, qcog::ingest::Format::Csv);
        benchmark::DoNotOptimize(data);
    }
}
BENCHMARK(BM_ParseCorpusCsv);

void BM_BuildModel(benchmark::State& state) {
    const auto data = qcog_bench::load_corpus();
    for (auto _ : state) {
        auto model = qcog::hilbert::build_state_vectors(data);
        benchmark::DoNotOptimize(model);
    }
}
BENCHMARK(BM_BuildModel);

void BM_AssignSigns(benchmark::State& state) {
    const auto data = qcog_bench::load_corpus();
    std::vector<double> lambdas;
    for (const auto& it : data.items) {
        lambdas.push_back(qcog::hilbert::lambda_value(it.mu_a, it.mu_b, it.mu_ab));
    }
    for (auto _ : state) {
        auto signs = qcog::hilbert::assign_signs(lambdas);
        benchmark::DoNotOptimize(signs);
    }
}
BENCHMARK(BM_AssignSigns);

void BM_ReconstructDisjunction(benchmark::State& state) {
    const auto model = qcog::hilbert::build_state_vectors(qcog_bench::load_corpus());
    for (auto _ : state) {
        auto rec = qcog::hilbert::reconstruct_disjunction(model);
        benchmark::DoNotOptimize(rec);
    }
}
BENCHMARK(BM_ReconstructDisjunction);

}  // namespace
