#include "curio/smc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace curio::smc {

DegenerateWeights::DegenerateWeights(int trial_index)
    : trial(trial_index),
      msg("degenerate likelihood: all particle weights vanished at trial " +
          std::to_string(trial_index)) {}

double logsumexp(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("logsumexp: empty input");
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x)
    if (v > m) m = v;
  if (!std::isfinite(m)) return m;  // all -inf
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

void normalize_log_weights(std::span<const double> log_w,
                           std::vector<double>& out, int trial_index) {
  if (log_w.empty()) throw std::invalid_argument("normalize: empty weights");
  double m = -std::numeric_limits<double>::infinity();
  for (double v : log_w)
    if (v > m) m = v;
  if (!std::isfinite(m)) throw DegenerateWeights(trial_index);
  out.resize(log_w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    out[i] = std::exp(log_w[i] - m);
    s += out[i];
  }
  if (!(s > 0.0)) throw DegenerateWeights(trial_index);
  const double inv = 1.0 / s;
  for (double& v : out) v *= inv;
}

double effective_sample_size(std::span<const double> w) {
  double s2 = 0.0;
  for (double v : w) s2 += v * v;
  if (!(s2 > 0.0)) return 0.0;
  return 1.0 / s2;
}

std::vector<std::uint32_t> systematic_resample(std::span<const double> w,
                                               std::size_t n, double u) {
  if (w.empty() || n == 0)
    throw std::invalid_argument("systematic_resample: empty input");
  if (!(u >= 0.0 && u < 1.0))
    throw std::invalid_argument("systematic_resample: u must be in [0,1)");
  std::vector<std::uint32_t> idx(n);
  const double step = 1.0 / static_cast<double>(n);
  double target = u * step;
  double cum = w[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (cum < target && j + 1 < w.size()) cum += w[++j];
    idx[i] = static_cast<std::uint32_t>(j);
    target += step;
  }
  return idx;
}

double weighted_mean(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size())
    throw std::invalid_argument("weighted_mean: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m += w[i] * x[i];
  return m;
}

double weighted_sd(std::span<const double> w, std::span<const double> x) {
  const double m = weighted_mean(w, x);
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = x[i] - m;
    v += w[i] * d * d;
  }
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace curio::smc
