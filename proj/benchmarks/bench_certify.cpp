#include <benchmark/benchmark.h>

#include "hardy/catalog.hpp"
#include "hardy/classify.hpp"
#include "hardy/weights.hpp"

namespace {

void BM_certify_classical(benchmark::State& state) {
    auto t = hardy::WeightTriple::from_spec({"power:p=2", "-4*ln(r)", "1/r", {}});
    for (auto _ : state) {
        auto cert = hardy::certify(t);
        benchmark::DoNotOptimize(cert.C);
    }
}
BENCHMARK(BM_certify_classical);

void BM_certify_log_weights(benchmark::State& state) {
    auto entry = hardy::catalog_load("log_weights:alpha=1,beta=1,p=1.5");
    auto t = entry.instantiate();
    for (auto _ : state) {
        auto cert = hardy::certify(t);
        benchmark::DoNotOptimize(cert.b1);
    }
}
BENCHMARK(BM_certify_log_weights);

void BM_classify_membership(benchmark::State& state) {
    auto t = hardy::WeightTriple::from_spec({"power:p=2", "-4*ln(r)", "1/r", {}});
    auto u = hardy::TestFunction::from_expression("identity", hardy::Expression::parse("r"));
    for (auto _ : state) {
        auto v = hardy::classify_membership(t, u);
        benchmark::DoNotOptimize(v.in_Rminus);
    }
}
BENCHMARK(BM_classify_membership);

}  // namespace
