#include "curio/ifep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "curio/rng.hpp"
#include "curio/smc.hpp"

namespace curio {

void DecoderConfig::validate() const {
  params.validate();
  if (n_particles < 100)
    throw std::invalid_argument("DecoderConfig: n_particles must be >= 100");
  if (!(resample_threshold > 0.0 && resample_threshold <= 1.0))
    throw std::invalid_argument(
        "DecoderConfig: resample_threshold must be in (0,1]");
  if (!(epsilon_c >= 0.0))
    throw std::invalid_argument("DecoderConfig: epsilon_c must be >= 0");
  if (!(init_p > 0.0))
    throw std::invalid_argument("DecoderConfig: init_p must be > 0");
  if (!(init_w_sd >= 0.0) || !(init_c_sd >= 0.0))
    throw std::invalid_argument("DecoderConfig: init SDs must be >= 0");
}

namespace {

inline double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct Ensemble {
  std::vector<double> w0, w1, c, log_w;
  explicit Ensemble(std::size_t n) : w0(n), w1(n), c(n), log_w(n, 0.0) {}
};

}  // namespace

DecodedTrajectory decode(const std::vector<TrialRecord>& trials,
                         const DecoderConfig& cfg) {
  if (trials.empty()) throw std::invalid_argument("decode: empty trial sequence");
  cfg.validate();

  const int N = cfg.n_particles;
  const int T = static_cast<int>(trials.size());
  const auto seed = cfg.seed;
  const double sw = cfg.params.sigma_w;
  const double beta = cfg.params.beta;
  const bool par = cfg.parallel;

  Ensemble ens(N);
  // Per-particle init streams: deterministic for any thread count.
#pragma omp parallel for if (par) schedule(static)
  for (int i = 0; i < N; ++i) {
    rng::Stream s(seed, rng::Tag::Init, 0, static_cast<std::uint64_t>(i));
    ens.w0[i] = cfg.init_w_sd * s.next_normal();
    ens.w1[i] = cfg.init_w_sd * s.next_normal();
    ens.c[i] = cfg.init_c_sd * s.next_normal();
  }

  RecognitionState replay;
  replay.mu = {cfg.init_mu, cfg.init_mu};
  replay.p = {cfg.init_p, cfg.init_p};

  DecodedTrajectory traj;
  traj.curiosity_mean.resize(T);
  traj.curiosity_sd.resize(T);
  traj.p_sick[0].resize(T);
  traj.p_sick[1].resize(T);
  traj.conf[0].resize(T);
  traj.conf[1].resize(T);
  traj.p_select_accel.resize(T);
  traj.ess.resize(T);

  std::vector<double> fw0(N), fw1(N), p_acc(N), weights;
  Ensemble scratch(N);

  for (int t = 0; t < T; ++t) {
    const Action a = trials[t].action;
    const int o = trials[t].outcome;
    if (o != 0 && o != 1)
      throw std::invalid_argument("decode: outcome must be 0 or 1 at trial " +
                                  std::to_string(t));

    // Shared per-option utility terms from the deterministic replay; only
    // the curiosity weight differs between particles.
    const double er_rest = expected_reward(replay, Action::Rest, cfg.params);
    const double er_acc =
        expected_reward(replay, Action::Accelerate, cfg.params);
    const double info_rest =
        expected_info_gain(replay, Action::Rest, cfg.params).expected_info;
    const double info_acc =
        expected_info_gain(replay, Action::Accelerate, cfg.params)
            .expected_info;
    const double d_er = er_acc - er_rest;
    const double d_info = info_acc - info_rest;
    const bool accel = a == Action::Accelerate;

    // Predict + correct kernel.  Writes per-particle arrays only; all
    // reductions below stay serial in index order.
#pragma omp parallel for if (par) schedule(static)
    for (int i = 0; i < N; ++i) {
      rng::Stream s(seed, rng::Tag::Drift, static_cast<std::uint64_t>(t),
                    static_cast<std::uint64_t>(i));
      ens.w0[i] += sw * s.next_normal();
      ens.w1[i] += sw * s.next_normal();
      ens.c[i] += cfg.epsilon_c * s.next_normal();

      const double x = beta * (d_er + ens.c[i] * d_info);
      p_acc[i] = stable_sigmoid(x);
      const double log_pa = accel ? log_logistic(x) : log_logistic(-x);

      fw0[i] = logistic(ens.w0[i]);
      fw1[i] = logistic(ens.w1[i]);
      const double f_ch = accel ? fw1[i] : fw0[i];
      const double log_po = o == 1 ? std::log(f_ch) : std::log1p(-f_ch);
      ens.log_w[i] += log_pa + log_po;
    }

    smc::normalize_log_weights(ens.log_w, weights, t);
    const double ess = smc::effective_sample_size(weights);

    traj.curiosity_mean[t] = smc::weighted_mean(weights, ens.c);
    traj.curiosity_sd[t] = smc::weighted_sd(weights, ens.c);
    traj.p_sick[0][t] = smc::weighted_mean(weights, fw0);
    traj.p_sick[1][t] = smc::weighted_mean(weights, fw1);
    traj.p_select_accel[t] = smc::weighted_mean(weights, p_acc);
    traj.ess[t] = ess;

    replay = update_recognition(replay, a, o, cfg.params);
    traj.conf[0][t] = confidence(replay, Action::Rest);
    traj.conf[1][t] = confidence(replay, Action::Accelerate);

    if (ess < cfg.resample_threshold * N) {
      rng::Stream rs(seed, rng::Tag::Resample, static_cast<std::uint64_t>(t));
      const auto idx =
          smc::systematic_resample(weights, static_cast<std::size_t>(N),
                                   rs.next_uniform_co());
      for (int i = 0; i < N; ++i) {
        scratch.w0[i] = ens.w0[idx[i]];
        scratch.w1[i] = ens.w1[idx[i]];
        scratch.c[i] = ens.c[idx[i]];
      }
      std::swap(ens.w0, scratch.w0);
      std::swap(ens.w1, scratch.w1);
      std::swap(ens.c, scratch.c);
      std::fill(ens.log_w.begin(), ens.log_w.end(), 0.0);
    }
  }
  return traj;
}

double rmse(std::span<const double> estimate, std::span<const double> truth) {
  if (estimate.size() != truth.size())
    throw std::invalid_argument("rmse: length mismatch");
  if (estimate.empty()) throw std::invalid_argument("rmse: empty series");
  double s = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate[i] - truth[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(estimate.size()));
}

}  // namespace curio
