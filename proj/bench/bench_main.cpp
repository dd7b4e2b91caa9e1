#include <benchmark/benchmark.h>

#include "faultmimo/harness.hpp"
#include "faultmimo/model.hpp"
#include "faultmimo/solvers.hpp"

using namespace faultmimo;

namespace {

Observation make_observation(int M) {
  SystemConfig s;
  s.M = M;
  s.K = 10;
  s.L = 10;
  s.P = 20;
  s.gamma = 0.05;
  s.total_pilot_power = 100.0;
  s.sigma2 = 0.1;
  Rng rng(1);
  const ChannelRealization ch = sample_channel(s, rng);
  const FaultPattern fp = sample_fault_pattern(s, rng);
  return decorrelate(simulate_training(ch, make_pilot(s.K, s.L), fp, s, rng), s);
}

// Time per outer iteration at a fixed iteration count.
void BM_Decompose(benchmark::State& state, Method method) {
  const Observation obs = make_observation(static_cast<int>(state.range(0)));
  SolverParams p;
  p.method = method;
  p.outer.max_iters = 10;
  p.outer.tol_primal = 0.0;
  p.outer.tol_dual = 0.0;
  int iters = 0;
  for (auto _ : state) {
    const EstimationResult r = decompose(obs, p);
    iters += r.outer_iterations;
    benchmark::DoNotOptimize(r.H_hat.data());
  }
  state.counters["outer_iter"] =
      benchmark::Counter(iters, benchmark::Counter::kIsRate | benchmark::Counter::kInvert);
}

// Harness sweep; arg is the worker count (1 is the serial reference).
void BM_Sweep(benchmark::State& state) {
  ExperimentConfig c = default_config(Experiment::SweepAlpha);
  c.system.M = 32;
  c.system.K = 4;
  c.system.L = 4;
  c.system.P = 6;
  c.system.total_pilot_power = 16.0;
  c.resolve_noise();
  c.methods = {"LS", "MMSE", "fsAD", "stPCP"};
  c.grid = {0.1, 0.2, 0.3, 0.4};
  c.trials = 4;
  c.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c).rows.size());
}

}  // namespace

BENCHMARK_CAPTURE(BM_Decompose, exAD, Method::ExAD)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, fsAD, Method::FsAD)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, stPCP, Method::StPCP)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
