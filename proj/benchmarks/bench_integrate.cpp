#include <benchmark/benchmark.h>

#include <cmath>

#include "hardy/integrate.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void BM_gamma_integral(benchmark::State& state) {
    auto f = [](double x) { return std::pow(x, 2.5) * std::exp(-x); };
    for (auto _ : state) {
        auto r = hardy::integrate_improper(f, 0.0, kInf, {});
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_gamma_integral);

void BM_weighted_modular(benchmark::State& state) {
    auto M = hardy::NFunction::make_power(2.0);
    auto g = hardy::Expression::parse("r*exp(-0.01/r-r/100)");
    auto phi = hardy::Expression::parse("-4*ln(r)");
    for (auto _ : state) {
        auto r = hardy::weighted_modular(g, M, phi, 0.0, kInf, {});
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_weighted_modular);

void BM_luxemburg_norm(benchmark::State& state) {
    auto M = hardy::NFunction::make_power(2.0);
    auto f = hardy::Expression::parse("1");
    auto phi = hardy::Expression::parse("r");
    for (auto _ : state) {
        auto r = hardy::luxemburg_norm(f, M, phi, 0.0, kInf, {});
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_luxemburg_norm);

}  // namespace
