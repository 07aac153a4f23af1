#include <benchmark/benchmark.h>

#include "hcd/hcd.hpp"

namespace {

hcd::Problem make_problem(std::size_t d, std::size_t K, std::size_t s) {
  hcd::GenSpec spec;
  spec.d = d;
  spec.K = K;
  spec.s = s;
  spec.seed = 7;
  return hcd::generate(spec);
}

void BM_SolveHcd(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto K = static_cast<std::size_t>(state.range(1));
  const auto s = static_cast<std::size_t>(state.range(2));
  const hcd::Problem p = make_problem(d, K, s);
  hcd::SolverParams params;
  for (auto _ : state) {
    hcd::Solution sol = hcd::solve_hcd(p, params);
    benchmark::DoNotOptimize(sol.objective);
  }
  state.SetLabel("d=" + std::to_string(d) + " K=" + std::to_string(K));
}
BENCHMARK(BM_SolveHcd)
    ->Args({100, 500, 10})
    ->Args({300, 2000, 20})
    ->Args({500, 2000, 50})
    ->Unit(benchmark::kMillisecond);

void BM_PlainIht(benchmark::State& state) {
  const hcd::Problem p = make_problem(100, 500, 10);
  hcd::SolverParams params;
  for (auto _ : state) {
    hcd::Solution sol = hcd::plain_iht_homotopy(p, params);
    benchmark::DoNotOptimize(sol.objective);
  }
}
BENCHMARK(BM_PlainIht)->Unit(benchmark::kMillisecond);

void BM_InnerLoop(benchmark::State& state) {
  const hcd::Problem p = make_problem(300, 2000, 20);
  hcd::SolverParams params;
  const double lambda = 0.01;
  // Active set of the recovered support; each iteration restarts from zero.
  const hcd::ActiveSet support = hcd::ActiveSet::from_pattern(*p.truth);
  for (auto _ : state) {
    hcd::SolverState st =
        hcd::SolverState::start(p, hcd::DenseVector(p.atoms()), lambda);
    st.active = support;
    hcd::InnerStats stats = hcd::act_coo_des(st, p, lambda, params);
    benchmark::DoNotOptimize(stats.sweeps);
  }
}
BENCHMARK(BM_InnerLoop)->Unit(benchmark::kMicrosecond);

void BM_Matvec(benchmark::State& state) {
  const hcd::Problem p = make_problem(300, 2000, 20);
  for (auto _ : state) {
    hcd::DenseVector g = hcd::matvec_transposed(p.dictionary, p.signal);
    benchmark::DoNotOptimize(g[0]);
  }
}
BENCHMARK(BM_Matvec)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
