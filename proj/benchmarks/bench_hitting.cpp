#include <benchmark/benchmark.h>

#include "spherehit/bessel_hitting.hpp"
#include "spherehit/drift_series.hpp"
#include "spherehit/transforms.hpp"

namespace sh = spherehit;

namespace {

const sh::Geometry kDrift3(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0});

}  // namespace

// range(0) is t in tenths
static void BM_RadialDensity(benchmark::State& st) {
  const sh::hitting::RadialInstance inst(sh::sf::Order(0.5), 2.0, 1.0);
  const double t = 0.1 * static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sh::hitting::hitting_density(inst, t));
}
BENCHMARK(BM_RadialDensity)->Arg(5)->Arg(50)->Arg(5000)->Unit(benchmark::kMicrosecond);

static void BM_RadialTail(benchmark::State& st) {
  const sh::hitting::RadialInstance inst(sh::sf::Order(0.5), 2.0, 1.0);
  const double t = 0.1 * static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sh::hitting::hitting_tail(inst, t, 0.0));
}
BENCHMARK(BM_RadialTail)->Arg(5)->Arg(50)->Arg(5000)->Unit(benchmark::kMicrosecond);

static void BM_DriftDensity(benchmark::State& st) {
  const double t = 0.1 * static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sh::drift::drift_density(kDrift3, t));
}
BENCHMARK(BM_DriftDensity)->Arg(5)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_DriftLt(benchmark::State& st) {
  const double lam = 0.1 * static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sh::transforms::drift_lt(kDrift3, lam));
}
BENCHMARK(BM_DriftLt)->Arg(1)->Arg(10)->Arg(100);

static void BM_JointLt(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(sh::transforms::joint_lt(kDrift3, 1.0));
}
BENCHMARK(BM_JointLt);
