// Decode throughput, OpenMP kernels vs the serial reference path.  Both paths
// produce byte-identical trajectories; this target only measures speed.

#include <benchmark/benchmark.h>

#include <vector>

#include "curio/ifep.hpp"
#include "curio/sim.hpp"

namespace {

std::vector<curio::TrialRecord> make_records(int trials) {
  curio::SimConfig sc;
  sc.trials = trials;
  sc.seed = 7;
  sc.schedule = curio::EnvSchedule::default_protocol(trials);
  const auto trace = curio::simulate_recu(sc);
  return trace.to_trial_records("bench", 1);
}

void bench_decode(benchmark::State& state, bool parallel) {
  const auto records = make_records(static_cast<int>(state.range(0)));
  curio::DecoderConfig dc;
  dc.n_particles = static_cast<int>(state.range(1));
  dc.seed = 11;
  dc.parallel = parallel;
  for (auto _ : state) {
    auto traj = curio::decode(records, dc);
    benchmark::DoNotOptimize(traj.curiosity_mean.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

void decode_serial(benchmark::State& state) { bench_decode(state, false); }
void decode_parallel(benchmark::State& state) { bench_decode(state, true); }

}  // namespace

BENCHMARK(decode_serial)->Args({200, 1000})->Args({200, 5000})->Unit(benchmark::kMillisecond);
BENCHMARK(decode_parallel)->Args({200, 1000})->Args({200, 5000})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
