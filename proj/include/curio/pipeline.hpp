#pragma once

#include <span>
#include <string>
#include <vector>

#include "curio/core.hpp"

// Raw session recordings (speed + EDA at ~4 Hz, SSQ questionnaire scores)
// to TrialRecords: 8 s windowing, action/outcome labeling, SCR extraction
// and the per-session ground-truth probability series.

namespace curio {

struct RawSession {
  std::vector<double> time_s;     // monotone
  std::vector<double> speed_mps;  // >= 0
  std::vector<double> eda_us;     // >= 0
  std::string participant_id;
  int task_index = 1;

  void validate() const;  // equal lengths, monotone near-uniform time
};

struct TrialWindow {
  int index = 0;  // 0-based
  double mean_speed = 0.0;
  double msdv = 0.0;
  Action action = Action::Rest;
  int outcome = 0;
  double scr_mean = 0.0;
  double sick_prob_truth = 0.0;
};

enum class Severity { Negligible, Low, Moderate, High };
std::string to_string(Severity s);

struct SSQRecord {
  double pre = 0.0;
  double post = 0.0;
  double score = 0.0;  // post - pre
  Severity severity = Severity::Negligible;
  bool negative_flagged = false;  // score < 0, classified Negligible
};

struct PipelineConfig {
  double window_s = 8.0;
  double speed_threshold_mps = 1.3;
  double msdv_threshold = 0.45;
};

// Non-overlapping consecutive windows; a trailing remainder shorter than
// window_s is dropped.  Fills index, mean_speed and msdv only.
std::vector<TrialWindow> segment_trials(const RawSession& session,
                                        double window_s = 8.0);

// Rest strictly below the threshold; the boundary goes to Accelerate.
Action label_action(double mean_speed, double threshold_mps = 1.3);

// MSDV = sqrt of the trapezoidal integral of squared acceleration over the
// window; acceleration by central finite differences (one-sided at edges).
double msdv(std::span<const double> speed, std::span<const double> time);

// No-sickness strictly below the threshold; the boundary counts as sick.
int label_outcome(double msdv_value, double threshold = 0.45);

// Phasic component: tonic = sliding-window minimum (4 s) followed by a
// moving average (4 s), edges clamped; phasic = max(eda - tonic, 0).
// Output length = input length.
std::vector<double> extract_scr(std::span<const double> eda, double rate_hz);

// Per-session min-max normalization of window SCR means to [0,1].
std::vector<double> scr_to_probability(std::span<const double> scr_means);

// score = post - pre, classified: [0,5] Negligible, (5,20] Low,
// (20,40] Moderate, >40 High; negative scores are Negligible + flagged.
SSQRecord ssq(double pre, double post);

// Full pipeline for one session: segment, label, SCR, normalize.
std::vector<TrialRecord> process_session(const RawSession& session,
                                         const PipelineConfig& cfg = {});

}  // namespace curio
