#include "curio/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curio/rng.hpp"

namespace curio {

void EnvSchedule::validate(int trials) const {
  if (mode == Mode::RandomWalk) {
    if (!(rw_sigma >= 0.0))
      throw std::invalid_argument("EnvSchedule: rw_sigma must be >= 0");
    return;
  }
  if (segments.empty())
    throw std::invalid_argument("EnvSchedule: piecewise schedule has no segments");
  if (segments.front().start_trial != 0)
    throw std::invalid_argument("EnvSchedule: first segment must start at trial 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (i > 0 && s.start_trial <= segments[i - 1].start_trial)
      throw std::invalid_argument("EnvSchedule: segment starts must increase");
    if (s.start_trial >= trials)
      throw std::invalid_argument("EnvSchedule: segment starts beyond last trial");
    for (double pr : s.prob)
      if (!(pr > 0.0 && pr < 1.0))
        throw std::invalid_argument(
            "EnvSchedule: piecewise probabilities must be in (0,1)");
  }
}

double EnvSchedule::prob_at(int trial, Action option) const {
  if (mode != Mode::Piecewise)
    throw std::logic_error("EnvSchedule::prob_at: not a piecewise schedule");
  const Segment* cur = &segments.front();
  for (const auto& s : segments) {
    if (s.start_trial <= trial) cur = &s;
    else break;
  }
  return cur->prob[index_of(option)];
}

EnvSchedule EnvSchedule::default_protocol(int trials) {
  const double rest[4] = {0.6, 0.4, 0.1, 0.9};
  const double accel[4] = {0.1, 0.9, 0.4, 0.6};
  EnvSchedule s;
  s.mode = Mode::Piecewise;
  for (int k = 0; k < 4; ++k) {
    Segment seg;
    seg.start_trial = k * (trials / 4);
    seg.prob = {rest[k], accel[k]};
    s.segments.push_back(seg);
  }
  return s;
}

double curiosity_schedule(int t, int T, double amplitude, double cycles) {
  if (T <= 0) throw std::invalid_argument("curiosity_schedule: T must be > 0");
  if (t < 0 || t >= T)
    throw std::invalid_argument("curiosity_schedule: t out of [0,T)");
  constexpr double pi = 3.141592653589793238462643383279502884;
  return amplitude * std::sin(cycles * pi * static_cast<double>(t) /
                              static_cast<double>(T));
}

namespace {

inline double logit(double p) { return std::log(p / (1.0 - p)); }

inline double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

SimTrace simulate_recu(const SimConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("simulate_recu: trials must be >= 1");
  if (!(config.init_p > 0.0))
    throw std::invalid_argument("simulate_recu: init_p must be > 0");
  config.params.validate();
  config.schedule.validate(config.trials);

  SimTrace trace;
  trace.config = config;
  trace.rows.reserve(config.trials);

  RecognitionState recog;
  recog.mu = {config.init_mu, config.init_mu};
  recog.p = {config.init_p, config.init_p};

  std::array<double, 2> w_walk = config.schedule.rw_init_w;
  double c_walk = 0.0;

  for (int t = 0; t < config.trials; ++t) {
    SimTrialRow row;
    row.trial = t;

    switch (config.curiosity.mode) {
      case CuriosityProcess::Mode::Sinusoid:
        row.c_true = curiosity_schedule(t, config.trials,
                                        config.curiosity.amplitude,
                                        config.curiosity.cycles);
        break;
      case CuriosityProcess::Mode::Constant:
        row.c_true = config.curiosity.constant;
        break;
      case CuriosityProcess::Mode::RandomWalk: {
        rng::Stream s(config.seed, rng::Tag::Misc, static_cast<std::uint64_t>(t));
        c_walk += config.curiosity.epsilon * s.next_normal();
        row.c_true = c_walk;
        break;
      }
    }

    rng::Stream env(config.seed, rng::Tag::Env, static_cast<std::uint64_t>(t));
    if (config.schedule.mode == EnvSchedule::Mode::RandomWalk) {
      w_walk[0] += config.schedule.rw_sigma * env.next_normal();
      w_walk[1] += config.schedule.rw_sigma * env.next_normal();
      row.w_true = w_walk;
    } else {
      row.w_true = {logit(config.schedule.prob_at(t, Action::Rest)),
                    logit(config.schedule.prob_at(t, Action::Accelerate))};
    }

    row.utility[0] = net_utility(recog, Action::Rest, row.c_true, config.params);
    row.utility[1] =
        net_utility(recog, Action::Accelerate, row.c_true, config.params);
    row.p_select_accel = stable_sigmoid(
        config.params.beta *
        (row.utility[1].net_utility - row.utility[0].net_utility));

    rng::Stream policy(config.seed, rng::Tag::Policy,
                       static_cast<std::uint64_t>(t));
    row.action = policy.next_uniform() < row.p_select_accel
                     ? Action::Accelerate
                     : Action::Rest;

    const double truth = logistic(row.w_true[index_of(row.action)]);
    row.outcome = env.next_uniform() < truth ? 1 : 0;

    recog = update_recognition(recog, row.action, row.outcome, config.params);
    row.mu = recog.mu;
    row.p = recog.p;
    trace.rows.push_back(row);
  }
  return trace;
}

std::vector<TrialRecord> SimTrace::to_trial_records(
    const std::string& participant_id, int task_index) const {
  std::vector<TrialRecord> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    TrialRecord tr;
    tr.participant_id = participant_id;
    tr.task_index = task_index;
    tr.trial = r.trial;
    tr.action = r.action;
    tr.outcome = r.outcome;
    tr.sick_prob_truth = logistic(r.w_true[index_of(r.action)]);
    out.push_back(tr);
  }
  return out;
}

double bateman_kernel(double t_s, double rise_s, double decay_s) {
  if (!(rise_s > 0.0 && decay_s > rise_s))
    throw std::invalid_argument("bateman_kernel: need 0 < rise < decay");
  if (t_s <= 0.0) return 0.0;
  const double peak_t =
      std::log(decay_s / rise_s) * rise_s * decay_s / (decay_s - rise_s);
  const double peak =
      std::exp(-peak_t / decay_s) - std::exp(-peak_t / rise_s);
  return (std::exp(-t_s / decay_s) - std::exp(-t_s / rise_s)) / peak;
}

std::vector<double> simulate_eda(double duration_s, double rate_hz,
                                 double event_rate_per_min, std::uint64_t seed,
                                 const EdaOptions& opts) {
  if (!(duration_s > 0.0))
    throw std::invalid_argument("simulate_eda: duration must be > 0");
  if (!(rate_hz > 0.0))
    throw std::invalid_argument("simulate_eda: rate must be > 0");
  const std::size_t n =
      static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  std::vector<double> eda(n);

  const double dt = 1.0 / rate_hz;
  for (std::size_t k = 0; k < n; ++k)
    eda[k] = opts.baseline_us + opts.drift_slope_us_per_s * (k * dt);

  if (event_rate_per_min > 0.0) {
    rng::Stream events(seed, rng::Tag::Eda, 0);
    rng::Stream amps(seed, rng::Tag::Eda, 1);
    const double rate_per_s = event_rate_per_min / 60.0;
    double t = -std::log(events.next_uniform()) / rate_per_s;
    while (t < duration_s) {
      const double amp = amps.next_uniform(opts.amp_lo_us, opts.amp_hi_us);
      const auto k0 = static_cast<std::size_t>(std::ceil(t * rate_hz));
      const auto k1 = std::min(
          n, static_cast<std::size_t>(std::ceil((t + 16.0) * rate_hz)));
      for (std::size_t k = k0; k < k1; ++k)
        eda[k] += amp * bateman_kernel(k * dt - t);
      t += -std::log(events.next_uniform()) / rate_per_s;
    }
  }

  if (opts.noise_sd_us > 0.0) {
    rng::Stream noise(seed, rng::Tag::Eda, 2);
    for (std::size_t k = 0; k < n; ++k)
      eda[k] += opts.noise_sd_us * noise.next_normal();
  }
  for (double& v : eda)
    if (v < 0.0) v = 0.0;
  return eda;
}

SynthSession synth_session(const SimTrace& trace, double window_s,
                           double rate_hz, const EdaOptions& opts) {
  if (trace.rows.empty())
    throw std::invalid_argument("synth_session: empty trace");
  const int n_trials = static_cast<int>(trace.rows.size());
  const double duration = n_trials * window_s;
  const std::size_t n =
      static_cast<std::size_t>(std::llround(duration * rate_hz));
  const double dt = 1.0 / rate_hz;

  // Base speeds straddle the 1.3 m/s action threshold; ramps over the first
  // 6 s of a transition trial keep the window mean on the correct side
  // (~0.066 m/s margin either way at 4 Hz) while the ramp's own MSDV stays
  // well under the 0.45 sickness threshold (~0.25).
  const double kRest = 1.0, kAccel = 1.6, kRamp = 6.0;
  // Sick trials carry a sinusoidal wiggle: 0.5 Hz makes four full cycles per
  // window (zero sampled mean at 4 Hz) and MSDV ~ 2.2.
  const double kWiggleAmp = 0.35, kWiggleHz = 0.5;
  constexpr double pi = 3.141592653589793238462643383279502884;

  SynthSession s;
  s.time_s.resize(n);
  s.speed_mps.resize(n);

  auto base = [&](int tr) {
    return trace.rows[tr].action == Action::Accelerate ? kAccel : kRest;
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double t = k * dt;
    int tr = static_cast<int>(t / window_s);
    if (tr >= n_trials) tr = n_trials - 1;
    const double tau = t - tr * window_s;
    double v = base(tr);
    if (tr > 0 && tau < kRamp) {
      const double prev = base(tr - 1);
      v = prev + (v - prev) * (tau / kRamp);
    }
    if (trace.rows[tr].outcome == 1)
      v += kWiggleAmp * std::sin(2.0 * pi * kWiggleHz * tau);
    s.time_s[k] = t;
    s.speed_mps[k] = v;
  }

  // EDA: quiet drifting baseline, plus one pulse per sick trial whose
  // amplitude scales with the ground-truth probability so per-window SCR
  // means carry the truth signal.
  EdaOptions quiet = opts;
  const double noise_sd = quiet.noise_sd_us;
  quiet.noise_sd_us = 0.0;
  s.eda_us = simulate_eda(duration, rate_hz, 0.0, trace.config.seed, quiet);
  for (int tr = 0; tr < n_trials; ++tr) {
    if (trace.rows[tr].outcome != 1) continue;
    const double truth =
        logistic(trace.rows[tr].w_true[index_of(trace.rows[tr].action)]);
    const double amp = 0.2 + 0.3 * truth;
    const double t0 = tr * window_s + 0.25;
    const auto k0 = static_cast<std::size_t>(std::ceil(t0 * rate_hz));
    const auto k1 =
        std::min(n, static_cast<std::size_t>(std::ceil((t0 + 16.0) * rate_hz)));
    for (std::size_t k = k0; k < k1; ++k)
      s.eda_us[k] += amp * bateman_kernel(k * dt - t0);
  }
  if (noise_sd > 0.0) {
    rng::Stream noise(trace.config.seed, rng::Tag::Eda, 3);
    for (std::size_t k = 0; k < n; ++k) {
      s.eda_us[k] += noise_sd * noise.next_normal();
      if (s.eda_us[k] < 0.0) s.eda_us[k] = 0.0;
    }
  }
  return s;
}

}  // namespace curio
