// Serial reference vs OpenMP kernel for each parallel pair.

#include <benchmark/benchmark.h>

#include <random>

#include "rvpp/core/bounds.hpp"
#include "rvpp/core/budgets.hpp"
#include "rvpp/core/synthetic.hpp"
#include "rvpp/evaluate/evaluate.hpp"
#include "rvpp/oracle/oracle.hpp"

using namespace rvpp;

namespace {

struct Protection {
  Series w, d;
  Protection(int T) : w(T), d(T) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < T; ++t) {
      w[t] = uniform(rng, 0, 50);
      d[t] = uniform(rng, 0, 20);
    }
  }
};

void BM_protection_serial(benchmark::State& st) {
  const Protection p(static_cast<int>(st.range(0)));
  const int g = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(oracle::brute_force_protection_serial(p.w, p.d, g, 1e9));
}
void BM_protection_omp(benchmark::State& st) {
  const Protection p(static_cast<int>(st.range(0)));
  const int g = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(oracle::brute_force_protection(p.w, p.d, g, 1e9));
}
BENCHMARK(BM_protection_serial)->Args({20, 6})->Args({24, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_protection_omp)->Args({20, 6})->Args({24, 8})->Unit(benchmark::kMillisecond);

History history(int days) {
  std::mt19937_64 rng(11);
  History h(days, Series(24));
  for (auto& row : h)
    for (auto& v : row) v = uniform(rng, 20, 160);
  return h;
}

void BM_bounds_serial(benchmark::State& st) {
  const History h = history(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(compute_bounds_serial(h, 0.1, 0.9));
}
void BM_bounds_omp(benchmark::State& st) {
  const History h = history(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(compute_bounds(h, 0.1, 0.9));
}
BENCHMARK(BM_bounds_serial)->Arg(365)->Arg(3650);
BENCHMARK(BM_bounds_omp)->Arg(365)->Arg(3650);

struct Oos {
  RvppInstance in = toy_instance();
  evaluate::Plan plan = evaluate::make_plan(in, Strategy::balanced, MarketSet::all());
  std::vector<evaluate::SampledScenario> scen = evaluate::sample_scenarios(in, 64, 7);
  evaluate::PenaltyConfig pen = evaluate::default_penalty(in);
};
const Oos& oos() {
  static const Oos o;
  return o;
}

void BM_oos_serial(benchmark::State& st) {
  const Oos& o = oos();
  for (auto _ : st) benchmark::DoNotOptimize(evaluate::out_of_sample_serial(o.plan, o.in, o.scen, o.pen));
}
void BM_oos_omp(benchmark::State& st) {
  const Oos& o = oos();
  for (auto _ : st) benchmark::DoNotOptimize(evaluate::out_of_sample(o.plan, o.in, o.scen, o.pen));
}
BENCHMARK(BM_oos_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_oos_omp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
