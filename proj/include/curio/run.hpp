#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curio/config.hpp"
#include "curio/ifep.hpp"
#include "curio/io.hpp"
#include "curio/sim.hpp"

// Command orchestration shared by the CLI and the test suites.

namespace curio {

// Applies CURIO_WORKERS / cfg.workers to the OpenMP runtime.
void apply_workers(const RunConfig& cfg);

// One (seed, epsilon) cell of the validation protocol, kept in memory so the
// acceptance suite can evaluate recovery without re-decoding.
struct ValidationRun {
  std::uint64_t sim_seed = 0;
  double epsilon = 0.0;
  SimTrace trace;
  DecodedTrajectory traj;
};

// Simulate -> decode sweep over cfg.validate_epsilons x cfg.validate_seeds.
// Returns one SweepCell per (epsilon, seed); optionally keeps the full runs.
std::vector<SweepCell> validate_protocol(const RunConfig& cfg,
                                         std::vector<ValidationRun>* keep =
                                             nullptr);

int run_simulate(const RunConfig& cfg);
int run_decode(const RunConfig& cfg);
int run_validate(const RunConfig& cfg);
int run_analyze(const RunConfig& cfg);

}  // namespace curio
