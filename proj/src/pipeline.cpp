#include "curio/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curio {

namespace {

double median_dt(const std::vector<double>& t) {
  std::vector<double> dts(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) dts[i] = t[i + 1] - t[i];
  std::sort(dts.begin(), dts.end());
  const std::size_t m = dts.size() / 2;
  return dts.size() % 2 ? dts[m] : 0.5 * (dts[m - 1] + dts[m]);
}

}  // namespace

void RawSession::validate() const {
  if (time_s.size() != speed_mps.size() || time_s.size() != eda_us.size())
    throw std::invalid_argument("RawSession: series lengths differ");
  if (time_s.size() < 2)
    throw std::invalid_argument("RawSession: need at least two samples");
  for (std::size_t i = 0; i + 1 < time_s.size(); ++i)
    if (!(time_s[i + 1] > time_s[i]))
      throw std::invalid_argument("RawSession: time must be strictly increasing");
  for (double v : speed_mps)
    if (v < 0.0 || !std::isfinite(v))
      throw std::invalid_argument("RawSession: speed must be finite and >= 0");
  for (double v : eda_us)
    if (v < 0.0 || !std::isfinite(v))
      throw std::invalid_argument("RawSession: EDA must be finite and >= 0");
  // Nominal recording rate is 4 Hz; tolerate 10% jitter on the median step.
  const double dt = median_dt(time_s);
  if (std::abs(dt - 0.25) > 0.025)
    throw std::invalid_argument(
        "RawSession: median sample step deviates more than 10% from 0.25 s");
  if (task_index < 1)
    throw std::invalid_argument("RawSession: task_index must be >= 1");
}

std::vector<TrialWindow> segment_trials(const RawSession& session,
                                        double window_s) {
  session.validate();
  if (!(window_s > 0.0))
    throw std::invalid_argument("segment_trials: window must be > 0");
  const double rate = 1.0 / median_dt(session.time_s);
  const auto per_window =
      static_cast<std::size_t>(std::llround(window_s * rate));
  if (per_window < 2 || session.time_s.size() < per_window)
    throw std::invalid_argument("segment_trials: session shorter than one window");

  const std::size_t n_windows = session.time_s.size() / per_window;
  std::vector<TrialWindow> out;
  out.reserve(n_windows);
  for (std::size_t k = 0; k < n_windows; ++k) {
    const std::size_t lo = k * per_window;
    TrialWindow w;
    w.index = static_cast<int>(k);
    double s = 0.0;
    for (std::size_t i = lo; i < lo + per_window; ++i) s += session.speed_mps[i];
    w.mean_speed = s / static_cast<double>(per_window);
    w.msdv = msdv({session.speed_mps.data() + lo, per_window},
                  {session.time_s.data() + lo, per_window});
    out.push_back(w);
  }
  return out;
}

Action label_action(double mean_speed, double threshold_mps) {
  if (mean_speed < 0.0 || !std::isfinite(mean_speed))
    throw std::invalid_argument("label_action: speed must be finite and >= 0");
  return mean_speed < threshold_mps ? Action::Rest : Action::Accelerate;
}

double msdv(std::span<const double> speed, std::span<const double> time) {
  const std::size_t n = speed.size();
  if (n != time.size()) throw std::invalid_argument("msdv: length mismatch");
  if (n < 2) throw std::invalid_argument("msdv: need at least two samples");

  std::vector<double> a(n);
  a[0] = (speed[1] - speed[0]) / (time[1] - time[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    a[i] = (speed[i + 1] - speed[i - 1]) / (time[i + 1] - time[i - 1]);
  a[n - 1] = (speed[n - 1] - speed[n - 2]) / (time[n - 1] - time[n - 2]);

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    integral += 0.5 * (a[i] * a[i] + a[i + 1] * a[i + 1]) *
                (time[i + 1] - time[i]);
  return std::sqrt(integral);
}

int label_outcome(double msdv_value, double threshold) {
  if (msdv_value < 0.0 || !std::isfinite(msdv_value))
    throw std::invalid_argument("label_outcome: MSDV must be finite and >= 0");
  return msdv_value < threshold ? 0 : 1;
}

std::vector<double> extract_scr(std::span<const double> eda, double rate_hz) {
  if (!(rate_hz > 0.0))
    throw std::invalid_argument("extract_scr: rate must be > 0");
  const std::size_t n = eda.size();
  if (static_cast<double>(n) / rate_hz < 8.0)
    throw std::invalid_argument("extract_scr: need at least 8 s of data");

  const auto w = std::max<std::size_t>(1, std::llround(4.0 * rate_hz));
  const std::size_t h_lo = (w - 1) / 2, h_hi = w / 2;
  auto lo_of = [&](std::size_t i) { return i >= h_lo ? i - h_lo : 0; };
  auto hi_of = [&](std::size_t i) { return std::min(n - 1, i + h_hi); };

  // Sliding minimum, then moving average, both over ~4 s centered windows
  // with edge replication (index clamping).
  std::vector<double> tonic(n), smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = eda[lo_of(i)];
    for (std::size_t j = lo_of(i); j <= hi_of(i); ++j) m = std::min(m, eda[j]);
    tonic[i] = m;
  }
  for (std::size_t i = 0; i < n; ++i) {
    // Fixed-width average with clamped indices == replication padding.
    double s = 0.0;
    const std::size_t lo = i >= h_lo ? i - h_lo : 0;
    const std::size_t hi = std::min(n - 1, i + h_hi);
    for (std::size_t j = lo; j <= hi; ++j) s += tonic[j];
    const std::size_t miss_lo = h_lo - (i - lo);
    const std::size_t miss_hi = h_hi - (hi - i);
    s += miss_lo * tonic[0] + miss_hi * tonic[n - 1];
    smooth[i] = s / static_cast<double>(w);
  }

  std::vector<double> phasic(n);
  for (std::size_t i = 0; i < n; ++i)
    phasic[i] = std::max(eda[i] - smooth[i], 0.0);
  return phasic;
}

std::vector<double> scr_to_probability(std::span<const double> scr_means) {
  if (scr_means.empty())
    throw std::invalid_argument("scr_to_probability: empty input");
  const auto [lo_it, hi_it] =
      std::minmax_element(scr_means.begin(), scr_means.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo))
    throw std::invalid_argument(
        "scr_to_probability: constant series has no defined scaling");
  std::vector<double> out(scr_means.size());
  for (std::size_t i = 0; i < scr_means.size(); ++i)
    out[i] = (scr_means[i] - lo) / (hi - lo);
  return out;
}

std::string to_string(Severity s) {
  switch (s) {
    case Severity::Negligible: return "negligible";
    case Severity::Low: return "low";
    case Severity::Moderate: return "moderate";
    case Severity::High: return "high";
  }
  return "negligible";
}

SSQRecord ssq(double pre, double post) {
  if (!std::isfinite(pre) || !std::isfinite(post))
    throw std::invalid_argument("ssq: scores must be finite");
  SSQRecord r;
  r.pre = pre;
  r.post = post;
  r.score = post - pre;
  if (r.score < 0.0) {
    r.severity = Severity::Negligible;
    r.negative_flagged = true;
  } else if (r.score <= 5.0) {
    r.severity = Severity::Negligible;
  } else if (r.score <= 20.0) {
    r.severity = Severity::Low;
  } else if (r.score <= 40.0) {
    r.severity = Severity::Moderate;
  } else {
    r.severity = Severity::High;
  }
  return r;
}

std::vector<TrialRecord> process_session(const RawSession& session,
                                         const PipelineConfig& cfg) {
  auto windows = segment_trials(session, cfg.window_s);
  const double rate = 1.0 / median_dt(session.time_s);
  const auto per_window =
      static_cast<std::size_t>(std::llround(cfg.window_s * rate));

  const auto phasic = extract_scr(session.eda_us, rate);
  std::vector<double> scr_means(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = k * per_window; i < (k + 1) * per_window; ++i)
      s += phasic[i];
    scr_means[k] = s / static_cast<double>(per_window);
  }
  const auto probs = scr_to_probability(scr_means);

  std::vector<TrialRecord> out;
  out.reserve(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) {
    TrialRecord tr;
    tr.participant_id = session.participant_id;
    tr.task_index = session.task_index;
    tr.trial = windows[k].index;
    tr.mean_speed = windows[k].mean_speed;
    tr.msdv = windows[k].msdv;
    tr.action = label_action(windows[k].mean_speed, cfg.speed_threshold_mps);
    tr.outcome = label_outcome(windows[k].msdv, cfg.msdv_threshold);
    tr.scr_mean = scr_means[k];
    tr.sick_prob_truth = probs[k];
    out.push_back(tr);
  }
  return out;
}

}  // namespace curio
