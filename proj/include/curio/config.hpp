#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curio/core.hpp"
#include "curio/ifep.hpp"
#include "curio/pipeline.hpp"
#include "curio/sim.hpp"

// Run configuration: flat `key = value` text file, every key with a
// documented default; unknown keys are rejected.

namespace curio {

enum class DecoderKind { Ifep, Subjective, Qlearning };
std::string to_string(DecoderKind k);
DecoderKind decoder_from_string(const std::string& s);

struct RunConfig {
  // model constants
  ModelParams params;  // alpha, beta, p0, sigma_w, epsilon_c (agent)

  // decoder
  int n_particles = 5000;
  double epsilon_c = 1.0;  // decoder curiosity/d drift SD
  double resample_threshold = 0.5;
  double init_mu = 0.0;
  double init_p = 1.0;
  double init_w_sd = 1.0;
  double init_c_sd = 2.0;
  double epsilon_theta = 0.05;  // Q-learning meta drift SD
  bool q_conventional = false;  // update chosen option only
  DecoderKind decoder = DecoderKind::Ifep;

  // simulation protocol
  int trials = 1000;
  std::string curiosity_mode = "sinusoid";  // sinusoid|constant|randomwalk
  double curiosity_amplitude = 4.0;
  double curiosity_cycles = 4.0;
  double curiosity_constant = 0.0;
  std::string schedule_mode = "piecewise";  // piecewise|randomwalk
  std::vector<int> schedule_breaks;         // empty = default protocol
  std::vector<double> schedule_rest;
  std::vector<double> schedule_accel;
  double schedule_rw_sigma = 0.1;
  double schedule_rw_init = 0.0;
  std::string participant_id = "sim01";
  int task_index = 1;

  // pipeline thresholds
  double window_s = 8.0;
  double speed_threshold = 1.3;
  double msdv_threshold = 0.45;
  double rate_hz = 4.0;

  // synthetic EDA
  double eda_baseline = 2.0;
  double eda_drift_slope = 0.001;
  double eda_noise_sd = 0.01;
  double eda_event_rate_per_min = 0.0;

  // validation protocol
  int validate_seeds = 10;
  std::vector<double> validate_epsilons{0.1, 1.0, 2.0, 3.0, 4.0, 5.0};

  // analysis
  int max_lag = 40;

  // orchestration
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = all hardware threads
  bool quiet = false;
  std::string input;    // decode/analyze: file or directory
  std::string ssq_csv;  // analyze: optional SSQ scores
  std::string out = "out";

  ModelParams agent_params() const { return params; }
  DecoderConfig decoder_config(std::uint64_t session_seed) const;
  SimConfig sim_config() const;
  PipelineConfig pipeline_config() const;
  void validate() const;

  // Fully-resolved sorted key=value view, echoed into every artifact.
  std::map<std::string, std::string> echo() const;
};

// Parse `key = value` lines ('#' comments, blank lines allowed); unknown keys
// and malformed values are errors naming the line.
RunConfig parse_config_file(const std::string& path);
void apply_config_line(RunConfig& cfg, const std::string& key,
                       const std::string& value);

}  // namespace curio
