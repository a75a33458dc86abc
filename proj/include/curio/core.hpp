#pragma once

#include <array>
#include <string>

// Decision-model core: two-option utility, entropy, policy, recognition
// update and confidence.  Everything here is a pure function; state is
// carried explicitly by the caller.

namespace curio {

// Two options.  In 1-based math notation Rest is option 1 and Accelerate is
// option 2; stored 0-based everywhere.
enum class Action : int { Rest = 0, Accelerate = 1 };

inline constexpr int index_of(Action a) { return static_cast<int>(a); }
inline constexpr Action other(Action a) {
  return a == Action::Rest ? Action::Accelerate : Action::Rest;
}
std::string to_string(Action a);
Action action_from_string(const std::string& s);

// Scalar model constants.  p_w = sigma_w^-2 is always derived, never stored.
struct ModelParams {
  double alpha = 0.05;    // recognition learning rate, > 0
  double beta = 2.0;      // inverse temperature, >= 0
  double p0 = 0.8;        // desired sickness probability, in (0,1)
  double sigma_w = 0.4;   // latent-cause drift SD, > 0
  double epsilon_c = 1.0; // curiosity drift SD, >= 0

  double p_w() const { return 1.0 / (sigma_w * sigma_w); }
  void validate() const;  // throws std::invalid_argument on bad fields
};

// Gaussian belief over the latent cause of each option (log-odds scale).
struct RecognitionState {
  std::array<double, 2> mu{0.0, 0.0};
  std::array<double, 2> p{1.0, 1.0};  // precisions, > 0
};

// All terms of the net utility of one option, kept for diagnostics.
// expected_info is clamped at zero (information gain is nonnegative by
// definition); the unclamped Taylor value is retained in expected_info_raw.
struct UtilityBreakdown {
  double expected_reward = 0.0;
  double marginal_entropy = 0.0;     // nats
  double conditional_entropy = 0.0;  // nats
  double expected_info = 0.0;        // nats, = max(0, marginal - conditional)
  double expected_info_raw = 0.0;    // nats, unclamped
  double net_utility = 0.0;          // expected_reward + c * expected_info
};

// Probabilities are clamped into [kProbFloor, 1-kProbFloor] before any
// logarithm.
inline constexpr double kProbFloor = 1e-9;

double clamp_prob(double p);

// Logistic f(x) = 1/(1+e^-x), computed in a form stable for any finite x and
// clamped into [kProbFloor, 1-kProbFloor].  Rejects non-finite input.
double logistic(double x);

// log(1/(1+e^-x)) without overflow; used for policy likelihoods.
double log_logistic(double x);

// Reward intensity: 0 when the outcome is absent, ln(p0/(1-p0)) when present.
double reward_intensity(int outcome, double p0);

// Second-order Taylor approximation of the outcome probability for one
// option, marginalizing the latent cause under the current belief plus the
// one-step drift: total variance = 1/p + 1/p_w.
double predict_outcome_prob(const RecognitionState& recog, Action option,
                            const ModelParams& params, int outcome);

double expected_reward(const RecognitionState& recog, Action option,
                       const ModelParams& params);

struct InfoGain {
  double marginal_entropy = 0.0;
  double conditional_entropy = 0.0;
  double expected_info = 0.0;      // clamped at 0
  double expected_info_raw = 0.0;  // marginal - conditional, unclamped
};

// Expected information gain of observing one more outcome of the option:
// marginal entropy of the predicted outcome minus the Taylor-approximated
// conditional entropy E[H(o|w)].
InfoGain expected_info_gain(const RecognitionState& recog, Action option,
                            const ModelParams& params);

UtilityBreakdown net_utility(const RecognitionState& recog, Action option,
                             double c, const ModelParams& params);

// P(Accelerate) = 1/(1+e^{-beta dU}) with dU = U(Accelerate) - U(Rest).
double action_probability(const RecognitionState& recog, double c,
                          const ModelParams& params);

// One recognition step after observing (action, outcome).  Both options'
// predictive variance inflates by the drift (K = sigma_w^2 + 1/p_prev); the
// chosen option is additionally corrected by the observation:
//   p_new = 1/K + f(mu)(1-f(mu)),  mu_new = mu + alpha (o - f(mu)).
// The unchosen option diffuses only: p_new = 1/K, mu unchanged.
RecognitionState update_recognition(const RecognitionState& recog, Action a,
                                    int outcome, const ModelParams& params);

// Recognition confidence gamma = p / f'(mu)^2 with f'(mu) = f(mu)(1-f(mu)).
double confidence(const RecognitionState& recog, Action option);

// One 8-second decision unit as consumed by the decoders.
struct TrialRecord {
  std::string participant_id;
  int task_index = 1;
  int trial = 0;
  double mean_speed = 0.0;
  double msdv = 0.0;
  Action action = Action::Rest;
  int outcome = 0;
  double scr_mean = 0.0;
  double sick_prob_truth = 0.0;  // in [0,1]; NaN when unknown
};

}  // namespace curio
