#include <benchmark/benchmark.h>

// the distribution's benchmark_main archive is not link-compatible with the
// system toolchain; provide the entry point directly
BENCHMARK_MAIN();
