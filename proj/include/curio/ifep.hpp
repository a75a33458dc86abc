#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curio/core.hpp"

// Inverse inference: a particle filter over (w_Rest, w_Accelerate, c) that
// recovers per-trial curiosity, ground-truth sickness probabilities and the
// agent's recognition confidence from an observed action/outcome sequence.
//
// The recognition state is NOT part of the particle: it depends only on the
// observed history, so a single deterministic replay is shared by all
// particles.  Particles carry only the latent environment (w per option) and
// curiosity (c).

namespace curio {

struct DecoderConfig {
  int n_particles = 5000;
  ModelParams params;               // constants shared with the assumed agent
  double epsilon_c = 1.0;           // curiosity drift SD (the swept noise)
  double resample_threshold = 0.5;  // resample when ESS < threshold * N
  std::uint64_t seed = 0;

  double init_mu = 0.0;  // recognition replay start, both options
  double init_p = 1.0;
  double init_w_sd = 1.0;  // particle init: w ~ Normal(0, init_w_sd^2)
  double init_c_sd = 2.0;  // particle init: c ~ Normal(0, init_c_sd^2)

  // Disable to run the serial reference path (same arithmetic, no OpenMP).
  bool parallel = true;

  void validate() const;
};

// Filtered per-trial posterior summaries.  ESS is recorded before any
// resampling; confidences come from the shared replay after the trial's
// observation.
struct DecodedTrajectory {
  std::vector<double> curiosity_mean;
  std::vector<double> curiosity_sd;
  std::array<std::vector<double>, 2> p_sick;  // posterior mean of f(w_i)
  std::array<std::vector<double>, 2> conf;    // replay confidence gamma_i
  std::vector<double> p_select_accel;
  std::vector<double> ess;

  std::size_t size() const { return curiosity_mean.size(); }
};

DecodedTrajectory decode(const std::vector<TrialRecord>& trials,
                         const DecoderConfig& cfg);

double rmse(std::span<const double> estimate, std::span<const double> truth);

}  // namespace curio
