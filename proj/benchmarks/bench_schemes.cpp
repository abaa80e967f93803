#include <benchmark/benchmark.h>

#include <random>

#include "jxlab/harness.hpp"

using namespace jxlab;

namespace {

SolutionPair random_pair(const ModelParams& p, const Grid& g) {
  std::mt19937_64 rng(3);
  return random_smooth_pair(p, g, rng);
}

void BM_JptStep(benchmark::State& state) {
  ModelParams p;
  p.eps = 0.05;
  const Grid g(static_cast<std::size_t>(state.range(0)), 0.0, 1.0);
  HyperbolicState h = riemann_initial(p, g, 2.0, 1.0, true).hyperbolic;
  const double dt = stable_dt(p, g).dt;
  for (auto _ : state) {
    h = jpt_step(p, g, h, dt);
    benchmark::DoNotOptimize(h.u.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LimitStep(benchmark::State& state) {
  ModelParams p;
  const Grid g(static_cast<std::size_t>(state.range(0)), 0.0, 1.0);
  LimitState l = riemann_initial(p, g, 2.0, 1.0, true).limit;
  const double dt = stable_dt(p, g).dt;
  for (auto _ : state) {
    l = limit_step(p, g, l, dt);
    benchmark::DoNotOptimize(l.ubar.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SemiDiscreteRhs(benchmark::State& state) {
  ModelParams p;
  p.eps = 0.1;
  const Grid g(static_cast<std::size_t>(state.range(0)), 0.0, 1.0);
  const SolutionPair s = random_pair(p, g);
  for (auto _ : state) benchmark::DoNotOptimize(semi_discrete_rhs(p, g, s.hyperbolic));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IdentityMismatch(benchmark::State& state) {
  ModelParams p;
  p.eps = 0.1;
  const Grid g(static_cast<std::size_t>(state.range(0)), 0.0, 1.0);
  const SolutionPair s = random_pair(p, g);
  for (auto _ : state)
    benchmark::DoNotOptimize(identity_mismatch(p, g, s.hyperbolic, s.limit).max_relative_mismatch);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_JptStep)->Arg(200)->Arg(800)->Arg(3200)->Arg(12800);
BENCHMARK(BM_LimitStep)->Arg(200)->Arg(800)->Arg(3200)->Arg(12800);
BENCHMARK(BM_SemiDiscreteRhs)->Arg(200)->Arg(800)->Arg(3200)->Arg(12800);
BENCHMARK(BM_IdentityMismatch)->Arg(200)->Arg(800)->Arg(3200)->Arg(12800);

BENCHMARK_MAIN();
