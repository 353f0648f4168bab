#include <benchmark/benchmark.h>

#include "spherehit/special_functions.hpp"

namespace sf = spherehit::sf;

static void BM_LogBesselI(benchmark::State& st) {
  const sf::Order mu(0.5 * static_cast<double>(st.range(0)));
  const double xi = static_cast<double>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(sf::log_bessel_i(mu, xi));
}
BENCHMARK(BM_LogBesselI)->Args({1, 1})->Args({1, 50})->Args({40, 20})->Args({1, 800});

static void BM_BesselK(benchmark::State& st) {
  const double xi = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sf::bessel_k(1.5, xi));
}
BENCHMARK(BM_BesselK)->Arg(1)->Arg(10)->Arg(100);

static void BM_PhiSequence(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sf::log_phi_sequence(sf::Order(0.5), n, 3.0));
  st.SetItemsProcessed(st.iterations() * (n + 1));
}
BENCHMARK(BM_PhiSequence)->Arg(16)->Arg(128)->Arg(400);

static void BM_Gegenbauer(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sf::gegenbauer_sequence(n, sf::Order(0.5), 0.3));
  st.SetItemsProcessed(st.iterations() * (n + 1));
}
BENCHMARK(BM_Gegenbauer)->Arg(16)->Arg(128)->Arg(400);
