#include <benchmark/benchmark.h>

// The distribution's benchmark_main archive is LTO bytecode tied to one
// compiler release, so each suite links this instead.
BENCHMARK_MAIN();
