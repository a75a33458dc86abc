#pragma once

#include <span>
#include <vector>

// Lagged cross-correlations, derivatives, chi-square association and
// Cramér's V.

namespace curio {

double pearson(std::span<const double> x, std::span<const double> y);

struct LagCorrelation {
  std::vector<int> lags;  // -max_lag .. +max_lag
  std::vector<double> r;
  int argmax_lag = 0;    // lag maximizing |r|
  double argmax_r = 0.0;
};

// r(k) = Pearson(x_t, y_{t+k}) over the overlapping range, k in
// [-max_lag, max_lag].  With x = expected information gain and y = curiosity,
// negative k means curiosity leads.  Errors on constant overlap segments and
// on series shorter than max_lag + 3.
LagCorrelation lagged_correlation(std::span<const double> x,
                                  std::span<const double> y, int max_lag);

// First differences over dt; output length = input length - 1.
std::vector<double> temporal_derivative(std::span<const double> x, double dt);

struct ChiSquareResult {
  double chi2 = 0.0;
  int dof = 0;
  double p = 1.0;
  double cramers_v = 0.0;
};

// Pearson chi-square without continuity correction on a counts matrix
// (rows x cols); p from the upper-tail regularized incomplete gamma,
// V = sqrt(chi2 / (n * min(rows-1, cols-1))).  Errors on any zero expected
// cell count.
ChiSquareResult chi_square(const std::vector<std::vector<double>>& counts);

// Upper-tail regularized incomplete gamma Q(a, x), by series for x < a+1 and
// continued fraction otherwise.  Exposed for oracle tests.
double gamma_q(double a, double x);

// lag (in samples) to seconds at the given sampling rate.
inline double lag_to_seconds(int lag_samples, double rate_hz) {
  return static_cast<double>(lag_samples) / rate_hz;
}

}  // namespace curio
