#include "curio/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curio {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("pearson: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw std::invalid_argument("pearson: constant series has no correlation");
  return sxy / std::sqrt(sxx * syy);
}

LagCorrelation lagged_correlation(std::span<const double> x,
                                  std::span<const double> y, int max_lag) {
  if (x.size() != y.size())
    throw std::invalid_argument("lagged_correlation: length mismatch");
  if (max_lag < 0)
    throw std::invalid_argument("lagged_correlation: max_lag must be >= 0");
  const int n = static_cast<int>(x.size());
  if (n <= max_lag + 2)
    throw std::invalid_argument(
        "lagged_correlation: series must be longer than max_lag + 2");

  LagCorrelation out;
  out.lags.reserve(2 * max_lag + 1);
  out.r.reserve(2 * max_lag + 1);
  double best = -1.0;
  for (int k = -max_lag; k <= max_lag; ++k) {
    const int t0 = k < 0 ? -k : 0;
    const int t1 = k < 0 ? n : n - k;  // pairs (x_t, y_{t+k})
    const int m = t1 - t0;
    std::vector<double> xs(m), ys(m);
    for (int t = t0; t < t1; ++t) {
      xs[t - t0] = x[t];
      ys[t - t0] = y[t + k];
    }
    const double r = pearson(xs, ys);
    out.lags.push_back(k);
    out.r.push_back(r);
    if (std::abs(r) > best) {
      best = std::abs(r);
      out.argmax_lag = k;
      out.argmax_r = r;
    }
  }
  return out;
}

std::vector<double> temporal_derivative(std::span<const double> x, double dt) {
  if (x.size() < 2)
    throw std::invalid_argument("temporal_derivative: need at least two points");
  if (!(dt > 0.0))
    throw std::invalid_argument("temporal_derivative: dt must be > 0");
  std::vector<double> out(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    out[i] = (x[i + 1] - x[i]) / dt;
  return out;
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;

  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series:  P(a,x) = e^{-x} x^a / Gamma(a) * sum x^k / (a)_{k+1}
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  // Upper continued fraction, modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

ChiSquareResult chi_square(const std::vector<std::vector<double>>& counts) {
  const std::size_t rows = counts.size();
  if (rows == 0) throw std::invalid_argument("chi_square: empty table");
  const std::size_t cols = counts[0].size();
  if (cols == 0) throw std::invalid_argument("chi_square: empty table");
  for (const auto& row : counts) {
    if (row.size() != cols)
      throw std::invalid_argument("chi_square: ragged table");
    for (double v : row)
      if (v < 0.0 || !std::isfinite(v))
        throw std::invalid_argument("chi_square: counts must be finite and >= 0");
  }
  if (rows < 2 || cols < 2)
    throw std::invalid_argument("chi_square: need at least a 2x2 table");

  std::vector<double> rsum(rows, 0.0), csum(cols, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      rsum[i] += counts[i][j];
      csum[j] += counts[i][j];
      n += counts[i][j];
    }
  if (!(n > 0.0)) throw std::invalid_argument("chi_square: empty table");

  ChiSquareResult res;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = rsum[i] * csum[j] / n;
      if (!(e > 0.0))
        throw std::invalid_argument(
            "chi_square: zero expected count (empty row or column)");
      const double d = counts[i][j] - e;
      res.chi2 += d * d / e;
    }
  res.dof = static_cast<int>((rows - 1) * (cols - 1));
  res.p = gamma_q(0.5 * res.dof, 0.5 * res.chi2);
  const double k = static_cast<double>(std::min(rows, cols) - 1);
  res.cramers_v = std::sqrt(res.chi2 / (n * k));
  return res;
}

}  // namespace curio
