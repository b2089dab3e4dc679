#include <benchmark/benchmark.h>

// The distro's libbenchmark_main.a carries LTO bytecode from another gcc
// patch release and fails to link, so main lives here.
BENCHMARK_MAIN();
