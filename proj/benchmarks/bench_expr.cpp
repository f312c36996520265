#include <benchmark/benchmark.h>

#include "hardy/expr.hpp"

namespace {

void BM_parse_log_weight(benchmark::State& state) {
    for (auto _ : state) {
        auto e = hardy::Expression::parse("-1*ln(r)-1*ln(ln(1+r))");
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_parse_log_weight);

void BM_eval_log_weight_derivative(benchmark::State& state) {
    auto phi2 = hardy::Expression::parse("-1*ln(r)-1*ln(ln(1+r))").derivative().derivative();
    double r = 0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi2(r));
        r = r < 1e6 ? r * 1.0001 : 0.9;
    }
}
BENCHMARK(BM_eval_log_weight_derivative);

void BM_differentiate_twice(benchmark::State& state) {
    auto phi = hardy::Expression::parse("-1*ln(r)-1*ln(ln(1+r))");
    for (auto _ : state) {
        auto d2 = phi.derivative().derivative();
        benchmark::DoNotOptimize(d2);
    }
}
BENCHMARK(BM_differentiate_twice);

}  // namespace
