#pragma once

#include <cstdint>
#include <vector>

#include "curio/core.hpp"

// Forward simulation: the model agent in a drifting two-option environment,
// plus a synthetic EDA/speed session generator for end-to-end pipeline tests.

namespace curio {

// Ground-truth sickness probabilities per option over time.
struct EnvSchedule {
  enum class Mode { Piecewise, RandomWalk };
  struct Segment {
    int start_trial = 0;
    std::array<double, 2> prob{0.5, 0.5};  // indexed by Action
  };

  Mode mode = Mode::Piecewise;
  std::vector<Segment> segments;            // Piecewise: sorted, first at 0
  double rw_sigma = 0.1;                    // RandomWalk drift SD
  std::array<double, 2> rw_init_w{0.0, 0.0};

  void validate(int trials) const;
  // Piecewise lookup; RandomWalk truth lives in the trace, not here.
  double prob_at(int trial, Action option) const;

  // Default protocol schedule: four equal segments over `trials` drawing from
  // the value set {0.1, 0.4, 0.6, 0.9}.  Rest walks the set in ascending
  // order; Accelerate sees {0.4, 0.9, 0.1, 0.6}, an ordering chosen so that
  // neither option is starved of samples while curiosity is negative
  // (exploitation-only phases of the default sinusoid), which keeps the
  // decoded per-option probabilities honest over every segment.
  static EnvSchedule default_protocol(int trials);
};

struct CuriosityProcess {
  enum class Mode { Sinusoid, Constant, RandomWalk };
  Mode mode = Mode::Sinusoid;
  double amplitude = 4.0;  // Sinusoid
  double cycles = 4.0;     // Sinusoid
  double constant = 0.0;   // Constant
  double epsilon = 1.0;    // RandomWalk step SD
};

struct SimConfig {
  int trials = 1000;
  ModelParams params;
  EnvSchedule schedule;
  CuriosityProcess curiosity;
  std::uint64_t seed = 1;
  double init_mu = 0.0;  // initial recognition belief, both options
  double init_p = 1.0;
};

// One row per trial.  Recognition fields are the post-update belief.
struct SimTrialRow {
  int trial = 0;
  double c_true = 0.0;
  std::array<double, 2> w_true{0.0, 0.0};  // log-odds of the truth
  Action action = Action::Rest;
  int outcome = 0;
  std::array<double, 2> mu{0.0, 0.0};
  std::array<double, 2> p{0.0, 0.0};
  std::array<UtilityBreakdown, 2> utility{};  // pre-decision
  double p_select_accel = 0.5;                // pre-decision policy
};

struct SimTrace {
  SimConfig config;
  std::vector<SimTrialRow> rows;

  std::vector<TrialRecord> to_trial_records(const std::string& participant_id,
                                            int task_index) const;
};

// amplitude * sin(cycles * pi * t / T).
double curiosity_schedule(int t, int T, double amplitude, double cycles);

SimTrace simulate_recu(const SimConfig& config);

struct EdaOptions {
  double baseline_us = 2.0;
  double drift_slope_us_per_s = 0.001;
  double noise_sd_us = 0.01;
  double amp_lo_us = 0.1;
  double amp_hi_us = 0.5;
};

// Unit-peak Bateman pulse: (e^{-t/decay} - e^{-t/rise}) scaled so the peak
// is 1; zero for t < 0.
double bateman_kernel(double t_s, double rise_s = 0.75, double decay_s = 2.0);

// Tonic drift + Poisson-timed Bateman pulses + Gaussian noise, clamped >= 0.
std::vector<double> simulate_eda(double duration_s, double rate_hz,
                                 double event_rate_per_min, std::uint64_t seed,
                                 const EdaOptions& opts = {});

// Speed/EDA session whose windowed labels reproduce the trace's actions and
// outcomes exactly: per-trial base speed with linear ramps at transitions,
// a sinusoidal wiggle on sick trials (pushes MSDV over threshold), and one
// EDA pulse per sick trial.
struct SynthSession {
  std::vector<double> time_s;
  std::vector<double> speed_mps;
  std::vector<double> eda_us;
};
SynthSession synth_session(const SimTrace& trace, double window_s = 8.0,
                           double rate_hz = 4.0,
                           const EdaOptions& opts = {});

}  // namespace curio
