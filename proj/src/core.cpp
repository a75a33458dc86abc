#include "curio/core.hpp"

#include <cmath>
#include <stdexcept>

namespace curio {

std::string to_string(Action a) {
  return a == Action::Rest ? "rest" : "accelerate";
}

Action action_from_string(const std::string& s) {
  if (s == "rest") return Action::Rest;
  if (s == "accelerate") return Action::Accelerate;
  throw std::invalid_argument("unknown action label: '" + s + "'");
}

void ModelParams::validate() const {
  auto bad = [](const char* what) {
    throw std::invalid_argument(std::string("ModelParams: ") + what);
  };
  if (!(alpha > 0.0) || !std::isfinite(alpha)) bad("alpha must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) bad("beta must be >= 0");
  if (!(p0 > 0.0 && p0 < 1.0)) bad("p0 must be in (0,1)");
  if (!(sigma_w > 0.0) || !std::isfinite(sigma_w)) bad("sigma_w must be > 0");
  if (!(epsilon_c >= 0.0) || !std::isfinite(epsilon_c))
    bad("epsilon_c must be >= 0");
}

double clamp_prob(double p) {
  if (p < kProbFloor) return kProbFloor;
  if (p > 1.0 - kProbFloor) return 1.0 - kProbFloor;
  return p;
}

double logistic(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("logistic: non-finite input");
  // exp of a negative magnitude only, so no overflow either side.
  double v;
  if (x >= 0.0) {
    v = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    v = e / (1.0 + e);
  }
  return clamp_prob(v);
}

double log_logistic(double x) {
  // log(1/(1+e^-x)) = -log1p(e^-x); flip for negative x.
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double reward_intensity(int outcome, double p0) {
  if (!(p0 > 0.0 && p0 < 1.0))
    throw std::invalid_argument("reward_intensity: p0 must be in (0,1)");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("reward_intensity: outcome must be 0 or 1");
  if (outcome == 0) return 0.0;
  return std::log(p0 / (1.0 - p0));
}

namespace {

// Total predictive variance of the latent cause: belief + one drift step.
inline double total_variance(const RecognitionState& recog, Action option,
                             const ModelParams& params) {
  const int i = index_of(option);
  return 1.0 / recog.p[i] + 1.0 / params.p_w();
}

}  // namespace

double predict_outcome_prob(const RecognitionState& recog, Action option,
                            const ModelParams& params, int outcome) {
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("predict_outcome_prob: outcome must be 0 or 1");
  const int i = index_of(option);
  const double fm = logistic(recog.mu[i]);
  const double s2 = total_variance(recog, option, params);
  const double corr = 0.5 * fm * (1.0 - fm) * (1.0 - 2.0 * fm) * s2;
  // The correction enters with opposite signs for o=1 / o=0, so the pair sums
  // to one before clamping.
  const double p = outcome == 1 ? fm + corr : (1.0 - fm) - corr;
  return clamp_prob(p);
}

double expected_reward(const RecognitionState& recog, Action option,
                       const ModelParams& params) {
  // R(o=0) = 0, so only the o=1 branch contributes.
  return predict_outcome_prob(recog, option, params, 1) *
         reward_intensity(1, params.p0);
}

InfoGain expected_info_gain(const RecognitionState& recog, Action option,
                            const ModelParams& params) {
  const int i = index_of(option);
  const double fm = logistic(recog.mu[i]);
  const double s2 = total_variance(recog, option, params);

  const double p1 = predict_outcome_prob(recog, option, params, 1);
  const double p0 = clamp_prob(1.0 - p1);

  InfoGain g;
  g.marginal_entropy = -(p1 * std::log(p1) + p0 * std::log(p0));

  // Taylor expansion of g(w) = f ln f + (1-f) ln(1-f) around mu:
  //   g''(mu) = f(1-f) (1 + (1-2f) ln(f/(1-f)))
  const double gm = fm * std::log(fm) + (1.0 - fm) * std::log(1.0 - fm);
  const double gpp =
      fm * (1.0 - fm) * (1.0 + (1.0 - 2.0 * fm) * std::log(fm / (1.0 - fm)));
  g.conditional_entropy = -(gm + 0.5 * gpp * s2);

  g.expected_info_raw = g.marginal_entropy - g.conditional_entropy;
  g.expected_info = g.expected_info_raw > 0.0 ? g.expected_info_raw : 0.0;
  return g;
}

UtilityBreakdown net_utility(const RecognitionState& recog, Action option,
                             double c, const ModelParams& params) {
  if (!std::isfinite(c))
    throw std::invalid_argument("net_utility: non-finite curiosity");
  UtilityBreakdown u;
  u.expected_reward = expected_reward(recog, option, params);
  const InfoGain g = expected_info_gain(recog, option, params);
  u.marginal_entropy = g.marginal_entropy;
  u.conditional_entropy = g.conditional_entropy;
  u.expected_info = g.expected_info;
  u.expected_info_raw = g.expected_info_raw;
  u.net_utility = u.expected_reward + c * u.expected_info;
  return u;
}

double action_probability(const RecognitionState& recog, double c,
                          const ModelParams& params) {
  const double du =
      net_utility(recog, Action::Accelerate, c, params).net_utility -
      net_utility(recog, Action::Rest, c, params).net_utility;
  // 1/(1+e^-x) without the probability clamp: the policy itself is exact.
  const double x = params.beta * du;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

RecognitionState update_recognition(const RecognitionState& recog, Action a,
                                    int outcome, const ModelParams& params) {
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("update_recognition: outcome must be 0 or 1");
  RecognitionState next = recog;
  const double sw2 = params.sigma_w * params.sigma_w;
  for (int i = 0; i < 2; ++i) {
    const double K = sw2 + 1.0 / recog.p[i];
    if (i == index_of(a)) {
      const double fm = logistic(recog.mu[i]);
      next.p[i] = 1.0 / K + fm * (1.0 - fm);
      next.mu[i] = recog.mu[i] + params.alpha * (outcome - fm);
    } else {
      next.p[i] = 1.0 / K;
    }
  }
  return next;
}

double confidence(const RecognitionState& recog, Action option) {
  const int i = index_of(option);
  const double fm = logistic(recog.mu[i]);
  const double fprime = fm * (1.0 - fm);
  return recog.p[i] / (fprime * fprime);
}

}  // namespace curio
