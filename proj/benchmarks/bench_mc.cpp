#include <benchmark/benchmark.h>

#include "spherehit/mc_oracle.hpp"

namespace sh = spherehit;

static void BM_SimulatePaths(benchmark::State& st) {
  const sh::Geometry geom(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0});
  const auto n = static_cast<std::int64_t>(st.range(0));
  const sh::mc::McRun run(11, n, 1e-3, 20.0);
  for (auto _ : st) benchmark::DoNotOptimize(sh::mc::simulate(geom, run, 1));
  st.SetItemsProcessed(st.iterations() * n);
}
BENCHMARK(BM_SimulatePaths)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
