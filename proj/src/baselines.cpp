#include "curio/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "curio/smc.hpp"

namespace curio {

namespace {

inline double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double clamp_alpha(double a) {
  return std::clamp(a, kQAlphaFloor, 1.0 - kQAlphaFloor);
}
inline double clamp_beta(double b) { return std::clamp(b, 0.0, kQBetaMax); }

}  // namespace

double subjective_net_utility(const RecognitionState& recog, double d,
                              const ModelParams& params, Action option) {
  if (!std::isfinite(d))
    throw std::invalid_argument("subjective_net_utility: non-finite d");
  return d * expected_reward(recog, option, params) +
         expected_info_gain(recog, option, params).expected_info;
}

double log_mean_positive(const std::vector<double>& x, int* count) {
  double s = 0.0;
  int n = 0;
  for (double v : x)
    if (v > 0.0) {
      s += std::log(v);
      ++n;
    }
  if (count) *count = n;
  return n > 0 ? s / n : 0.0;
}

SubjectiveTrajectory decode_subjective(const std::vector<TrialRecord>& trials,
                                       const DecoderConfig& cfg) {
  if (trials.empty())
    throw std::invalid_argument("decode_subjective: empty trial sequence");
  cfg.validate();

  const int N = cfg.n_particles;
  const int T = static_cast<int>(trials.size());
  const auto seed = cfg.seed;
  const double sw = cfg.params.sigma_w;
  const double beta = cfg.params.beta;
  const bool par = cfg.parallel;

  std::vector<double> w0(N), w1(N), d(N), log_w(N, 0.0);
#pragma omp parallel for if (par) schedule(static)
  for (int i = 0; i < N; ++i) {
    rng::Stream s(seed, rng::Tag::Init, 0, static_cast<std::uint64_t>(i));
    w0[i] = cfg.init_w_sd * s.next_normal();
    w1[i] = cfg.init_w_sd * s.next_normal();
    d[i] = cfg.init_c_sd * s.next_normal();
  }

  RecognitionState replay;
  replay.mu = {cfg.init_mu, cfg.init_mu};
  replay.p = {cfg.init_p, cfg.init_p};

  SubjectiveTrajectory traj;
  traj.d_mean.resize(T);
  traj.d_sd.resize(T);
  traj.p_sick[0].resize(T);
  traj.p_sick[1].resize(T);
  traj.conf[0].resize(T);
  traj.conf[1].resize(T);
  traj.p_select_accel.resize(T);
  traj.ess.resize(T);

  std::vector<double> fw0(N), fw1(N), p_acc(N), weights;
  std::vector<double> sw0(N), sw1(N), sd(N);

  for (int t = 0; t < T; ++t) {
    const Action a = trials[t].action;
    const int o = trials[t].outcome;
    const double er_rest = expected_reward(replay, Action::Rest, cfg.params);
    const double er_acc =
        expected_reward(replay, Action::Accelerate, cfg.params);
    const double d_er = er_acc - er_rest;
    const double d_info =
        expected_info_gain(replay, Action::Accelerate, cfg.params)
            .expected_info -
        expected_info_gain(replay, Action::Rest, cfg.params).expected_info;
    const bool accel = a == Action::Accelerate;

#pragma omp parallel for if (par) schedule(static)
    for (int i = 0; i < N; ++i) {
      rng::Stream s(seed, rng::Tag::Drift, static_cast<std::uint64_t>(t),
                    static_cast<std::uint64_t>(i));
      w0[i] += sw * s.next_normal();
      w1[i] += sw * s.next_normal();
      d[i] += cfg.epsilon_c * s.next_normal();

      const double x = beta * (d[i] * d_er + d_info);
      p_acc[i] = stable_sigmoid(x);
      const double log_pa = accel ? log_logistic(x) : log_logistic(-x);
      fw0[i] = logistic(w0[i]);
      fw1[i] = logistic(w1[i]);
      const double f_ch = accel ? fw1[i] : fw0[i];
      log_w[i] += log_pa + (o == 1 ? std::log(f_ch) : std::log1p(-f_ch));
    }

    smc::normalize_log_weights(log_w, weights, t);
    const double ess = smc::effective_sample_size(weights);

    traj.d_mean[t] = smc::weighted_mean(weights, d);
    traj.d_sd[t] = smc::weighted_sd(weights, d);
    traj.p_sick[0][t] = smc::weighted_mean(weights, fw0);
    traj.p_sick[1][t] = smc::weighted_mean(weights, fw1);
    traj.p_select_accel[t] = smc::weighted_mean(weights, p_acc);
    traj.ess[t] = ess;

    replay = update_recognition(replay, a, o, cfg.params);
    traj.conf[0][t] = confidence(replay, Action::Rest);
    traj.conf[1][t] = confidence(replay, Action::Accelerate);

    if (ess < cfg.resample_threshold * N) {
      rng::Stream rs(seed, rng::Tag::Resample, static_cast<std::uint64_t>(t));
      const auto idx = smc::systematic_resample(
          weights, static_cast<std::size_t>(N), rs.next_uniform_co());
      for (int i = 0; i < N; ++i) {
        sw0[i] = w0[idx[i]];
        sw1[i] = w1[idx[i]];
        sd[i] = d[idx[i]];
      }
      std::swap(w0, sw0);
      std::swap(w1, sw1);
      std::swap(d, sd);
      std::fill(log_w.begin(), log_w.end(), 0.0);
    }
  }

  double s = 0.0;
  for (double v : traj.d_mean) s += v;
  traj.d_arith_mean = s / T;
  traj.d_log_mean = log_mean_positive(traj.d_mean, &traj.d_log_count);
  return traj;
}

QStepResult q_step(const QLearnState& state, Action a, int r,
                   double eps_theta, rng::Stream& rng, bool conventional) {
  if (r != 0 && r != 1)
    throw std::invalid_argument("q_step: reward indicator must be 0 or 1");
  if (!(eps_theta >= 0.0))
    throw std::invalid_argument("q_step: eps_theta must be >= 0");

  QStepResult res;
  res.state = state;
  if (eps_theta > 0.0) {
    res.state.alpha_t =
        clamp_alpha(state.alpha_t + eps_theta * rng.next_normal());
    res.state.beta_t = clamp_beta(state.beta_t + eps_theta * rng.next_normal());
  }

  const double p_acc = stable_sigmoid(
      res.state.beta_t * (res.state.q[1] - res.state.q[0]));
  res.probs = {1.0 - p_acc, p_acc};

  const int chosen = index_of(a);
  for (int i = 0; i < 2; ++i) {
    if (conventional && i != chosen) continue;
    const double a_i = i == chosen ? 1.0 : 0.0;
    res.state.q[i] += res.state.alpha_t * (r * a_i - res.state.q[i]);
  }
  return res;
}

QLearnTrajectory decode_qlearning(const std::vector<TrialRecord>& trials,
                                  const DecoderConfig& cfg, double eps_theta,
                                  bool conventional) {
  if (trials.empty())
    throw std::invalid_argument("decode_qlearning: empty trial sequence");
  cfg.validate();

  const int N = cfg.n_particles;
  const int T = static_cast<int>(trials.size());
  const auto seed = cfg.seed;
  const bool par = cfg.parallel;

  std::vector<double> al(N), be(N), q0(N, 0.5), q1(N, 0.5), log_w(N, 0.0);
#pragma omp parallel for if (par) schedule(static)
  for (int i = 0; i < N; ++i) {
    rng::Stream s(seed, rng::Tag::Init, 0, static_cast<std::uint64_t>(i));
    al[i] = s.next_uniform(0.02, 0.98);
    be[i] = s.next_uniform(0.0, 10.0);
  }

  QLearnTrajectory traj;
  traj.alpha_mean.resize(T);
  traj.alpha_sd.resize(T);
  traj.beta_mean.resize(T);
  traj.beta_sd.resize(T);
  traj.q_rest.resize(T);
  traj.q_accel.resize(T);
  traj.p_select_accel.resize(T);
  traj.ess.resize(T);

  std::vector<double> p_acc(N), weights;
  std::vector<double> s_al(N), s_be(N), s_q0(N), s_q1(N);

  for (int t = 0; t < T; ++t) {
    const Action a = trials[t].action;
    const int o = trials[t].outcome;

#pragma omp parallel for if (par) schedule(static)
    for (int i = 0; i < N; ++i) {
      rng::Stream s(seed, rng::Tag::Drift, static_cast<std::uint64_t>(t),
                    static_cast<std::uint64_t>(i));
      QLearnState st;
      st.alpha_t = al[i];
      st.beta_t = be[i];
      st.q = {q0[i], q1[i]};
      const QStepResult r = q_step(st, a, o, eps_theta, s, conventional);
      al[i] = r.state.alpha_t;
      be[i] = r.state.beta_t;
      q0[i] = r.state.q[0];
      q1[i] = r.state.q[1];
      p_acc[i] = r.probs[1];
      log_w[i] += std::log(clamp_prob(r.probs[index_of(a)]));
    }

    smc::normalize_log_weights(log_w, weights, t);
    const double ess = smc::effective_sample_size(weights);

    traj.alpha_mean[t] = smc::weighted_mean(weights, al);
    traj.alpha_sd[t] = smc::weighted_sd(weights, al);
    traj.beta_mean[t] = smc::weighted_mean(weights, be);
    traj.beta_sd[t] = smc::weighted_sd(weights, be);
    traj.q_rest[t] = smc::weighted_mean(weights, q0);
    traj.q_accel[t] = smc::weighted_mean(weights, q1);
    traj.p_select_accel[t] = smc::weighted_mean(weights, p_acc);
    traj.ess[t] = ess;

    if (ess < cfg.resample_threshold * N) {
      rng::Stream rs(seed, rng::Tag::Resample, static_cast<std::uint64_t>(t));
      const auto idx = smc::systematic_resample(
          weights, static_cast<std::size_t>(N), rs.next_uniform_co());
      for (int i = 0; i < N; ++i) {
        s_al[i] = al[idx[i]];
        s_be[i] = be[idx[i]];
        s_q0[i] = q0[idx[i]];
        s_q1[i] = q1[idx[i]];
      }
      std::swap(al, s_al);
      std::swap(be, s_be);
      std::swap(q0, s_q0);
      std::swap(q1, s_q1);
      std::fill(log_w.begin(), log_w.end(), 0.0);
    }
  }
  return traj;
}

std::vector<TrialRecord> qlearn_generate(int trials, double alpha, double beta,
                                         std::array<double, 2> reward_prob,
                                         std::uint64_t seed,
                                         bool conventional) {
  if (trials < 1)
    throw std::invalid_argument("qlearn_generate: trials must be >= 1");
  for (double p : reward_prob)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("qlearn_generate: probabilities in [0,1]");

  QLearnState st;
  st.alpha_t = clamp_alpha(alpha);
  st.beta_t = clamp_beta(beta);
  st.q = {0.5, 0.5};

  std::vector<TrialRecord> out;
  out.reserve(trials);
  rng::Stream dummy(0);
  for (int t = 0; t < trials; ++t) {
    const double p_acc = stable_sigmoid(st.beta_t * (st.q[1] - st.q[0]));
    rng::Stream policy(seed, rng::Tag::Policy, static_cast<std::uint64_t>(t));
    const Action a =
        policy.next_uniform() < p_acc ? Action::Accelerate : Action::Rest;
    rng::Stream env(seed, rng::Tag::Env, static_cast<std::uint64_t>(t));
    const int r = env.next_uniform() < reward_prob[index_of(a)] ? 1 : 0;
    st = q_step(st, a, r, 0.0, dummy, conventional).state;

    TrialRecord tr;
    tr.participant_id = "qgen";
    tr.trial = t;
    tr.action = a;
    tr.outcome = r;
    tr.sick_prob_truth = reward_prob[index_of(a)];
    out.push_back(tr);
  }
  return out;
}

}  // namespace curio
