#pragma once

#include <cstdint>
#include <vector>

#include "curio/core.hpp"
#include "curio/ifep.hpp"
#include "curio/rng.hpp"

// The two comparison decoders: subjective-reward weighting (latent desire d
// instead of curiosity) and Q-learning with temporally drifting
// meta-parameters (latent alpha_t, beta_t).

namespace curio {

// ---- subjective reward ----------------------------------------------------

// U = d * E[reward] + E[info]; reuses the core terms.
double subjective_net_utility(const RecognitionState& recog, double d,
                              const ModelParams& params, Action option);

struct SubjectiveTrajectory {
  std::vector<double> d_mean;
  std::vector<double> d_sd;
  std::array<std::vector<double>, 2> p_sick;
  std::array<std::vector<double>, 2> conf;
  std::vector<double> p_select_accel;
  std::vector<double> ess;

  // Summary statistics over the d_mean trajectory.  The log mean is taken
  // over trials with d_mean > 0; log_count reports how many qualified.
  double d_arith_mean = 0.0;
  double d_log_mean = 0.0;
  int d_log_count = 0;

  std::size_t size() const { return d_mean.size(); }
};

// Particle filter with latent (w_Rest, w_Accelerate, d).  The d drift reuses
// cfg.epsilon_c as its step SD and init_c_sd as its initial spread.
SubjectiveTrajectory decode_subjective(const std::vector<TrialRecord>& trials,
                                       const DecoderConfig& cfg);

// Log-mean convention used for the d summary: mean of ln(x) over positive x.
double log_mean_positive(const std::vector<double>& x, int* count = nullptr);

// ---- Q-learning -----------------------------------------------------------

struct QLearnState {
  std::array<double, 2> q{0.5, 0.5};
  double alpha_t = 0.3;  // clamped to (0,1)
  double beta_t = 3.0;   // clamped to [0, 20]
};

struct QStepResult {
  QLearnState state;
  std::array<double, 2> probs;  // softmax selection probabilities
};

inline constexpr double kQAlphaFloor = 1e-6;
inline constexpr double kQBetaMax = 20.0;

// One Q-learning step: (1) meta-parameters drift by eps_theta * zeta and are
// clamped; (2) selection probabilities from the drifted state's softmax;
// (3) value update Q_i += alpha (r a_i - Q_i) with a_i in {0,1} marking the
// chosen option — note the literal form decays unchosen values toward zero.
// `conventional` restricts the update to the chosen option.
QStepResult q_step(const QLearnState& state, Action a, int r,
                   double eps_theta, rng::Stream& rng,
                   bool conventional = false);

struct QLearnTrajectory {
  std::vector<double> alpha_mean, alpha_sd;
  std::vector<double> beta_mean, beta_sd;
  std::vector<double> q_rest, q_accel;  // posterior mean of replayed values
  std::vector<double> p_select_accel;
  std::vector<double> ess;

  std::size_t size() const { return alpha_mean.size(); }
};

// Particle filter over (alpha, beta) with per-particle Q replay from the
// observed actions/outcomes.  Init: alpha ~ U(0.02, 0.98), beta ~ U(0, 10).
QLearnTrajectory decode_qlearning(const std::vector<TrialRecord>& trials,
                                  const DecoderConfig& cfg,
                                  double eps_theta = 0.05,
                                  bool conventional = false);

// Constant-parameter generator on a stationary two-option Bernoulli
// environment; the round-trip target for decode_qlearning.
std::vector<TrialRecord> qlearn_generate(int trials, double alpha, double beta,
                                         std::array<double, 2> reward_prob,
                                         std::uint64_t seed,
                                         bool conventional = false);

}  // namespace curio
