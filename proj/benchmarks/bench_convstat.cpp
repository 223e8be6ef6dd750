#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "convstat/covest.hpp"
#include "convstat/hyptest.hpp"
#include "convstat/simlab.hpp"
#include "convstat/symlin.hpp"

using namespace convstat;

namespace {

Pmv random_pmv(std::mt19937_64& gen, std::size_t r) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> v(r + 1);
  double sum = 0.0;
  for (auto& x : v) sum += (x = u(gen));
  for (auto& x : v) x /= sum;
  return Pmv(std::move(v));
}

std::vector<Pmv> random_model(std::size_t k, std::size_t r) {
  std::mt19937_64 gen(7);
  std::vector<Pmv> xs;
  for (std::size_t i = 0; i < k; ++i) xs.push_back(random_pmv(gen, r));
  return xs;
}

void BM_ConvolveAll(benchmark::State& state) {
  const auto xs = random_model(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_all(xs));
}
BENCHMARK(BM_ConvolveAll)->Arg(2)->Arg(8)->Arg(32);

void BM_Psi(benchmark::State& state) {
  CovSpec spec;
  spec.pmvs = random_model(static_cast<std::size_t>(state.range(0)), 3);
  spec.weights.assign(spec.pmvs.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(psi(spec));
}
BENCHMARK(BM_Psi)->Arg(2)->Arg(8)->Arg(32);

void BM_Eigh(benchmark::State& state) {
  CovSpec spec;
  spec.pmvs = random_model(static_cast<std::size_t>(state.range(0)), 3);
  spec.weights.assign(spec.pmvs.size(), 1.0);
  const SymMatrix a = psi(spec);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(a));
  state.SetLabel("dim " + std::to_string(a.dim()));
}
BENCHMARK(BM_Eigh)->Arg(2)->Arg(8)->Arg(32);

void BM_GofTest(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(11);
  std::bernoulli_distribution b1(0.3), b2(0.8);
  std::vector<std::int64_t> x1(m), x2(m);
  for (std::size_t j = 0; j < m; ++j) {
    x1[j] = b1(gen);
    x2[j] = b2(gen);
  }
  const std::vector<CanonicalVariable> xs{{"X1", x1, 1, 0}, {"X2", x2, 1, 0}};
  const Pmv z = z_rho(0.3, 0.8, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(gof_test(xs, z, RankPolicy::fixed(2)));
}
BENCHMARK(BM_GofTest)->Arg(100)->Arg(10000);

void BM_SimulateReplicates(benchmark::State& state) {
  SimScenario s;
  s.n1 = s.n2 = s.n3 = 100;
  s.L = 1000;
  for (const char* id : {"C1_GF", "C2_ED", "Z2_GF", "P_GF"}) {
    s.statistics.push_back(StatisticId::parse(id));
  }
  for (auto _ : state) benchmark::DoNotOptimize(run(s, static_cast<unsigned>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.L));
}
BENCHMARK(BM_SimulateReplicates)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
