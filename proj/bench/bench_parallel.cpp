#include <benchmark/benchmark.h>

#include <vector>

#include "concentra/complexity.hpp"
#include "concentra/parallel.hpp"
#include "concentra/reuse_toy.hpp"
#include "concentra/rng.hpp"

using namespace concentra;

namespace {

std::vector<std::vector<double>> family(int funcs, int n) {
  Rng r(1);
  std::vector<std::vector<double>> t(funcs, std::vector<double>(n));
  for (auto& f : t)
    for (auto& x : f) x = r.normal();
  return t;
}

void BM_RademacherSerial(benchmark::State& st) {
  const auto t = family(32, static_cast<int>(st.range(0)));
  complexity::RademacherOptions o;
  o.draws = 20000;
  for (auto _ : st) benchmark::DoNotOptimize(complexity::empirical_rademacher_serial(t, o).value);
}

void BM_RademacherParallel(benchmark::State& st) {
  const auto t = family(32, static_cast<int>(st.range(0)));
  complexity::RademacherOptions o;
  o.draws = 20000;
  o.workers = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(complexity::empirical_rademacher(t, o).value);
}

void BM_ToyTrials(benchmark::State& st) {
  const ulln::ReuseToy toy({});
  const auto p = toy.problem(50, 4);
  const auto pop = toy.population_means();
  const int workers = static_cast<int>(st.range(0));
  for (auto _ : st) {
    auto fn = [&](std::size_t i) { return ulln::run_toy_trial(toy, p, pop, 3, i).excess; };
    auto out = workers == 0 ? run_trials_serial<double>(500, fn) : run_trials<double>(500, workers, fn);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_RademacherSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RademacherParallel)->Args({50, 1})->Args({50, 4})->Args({200, 1})->Args({200, 4})->Unit(benchmark::kMillisecond);
// 0 = serial reference
BENCHMARK(BM_ToyTrials)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
