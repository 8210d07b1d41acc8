#include <benchmark/benchmark.h>

#include "caustics/mpoly.hpp"
#include "caustics/parse.hpp"

using namespace caustics;

static void BM_MPolyMul(benchmark::State& state) {
  MPoly a = parse_poly("x^2+y^2-z^2").pow(unsigned(state.range(0)));
  MPoly b = parse_poly("x*y-z^2+3*x*z").pow(unsigned(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_MPolyMul)->Arg(2)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
