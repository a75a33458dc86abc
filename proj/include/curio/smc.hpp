#pragma once

#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <vector>

// Weighted-ensemble plumbing shared by all particle decoders.
//
// Every reduction here runs serially in fixed index order.  The parallel
// kernels elsewhere only fill per-particle arrays, so results are
// bit-identical for any worker count.

namespace curio::smc {

// Raised when a correction step leaves no particle with nonzero weight.
struct DegenerateWeights : std::exception {
  explicit DegenerateWeights(int trial_index);
  const char* what() const noexcept override { return msg.c_str(); }
  int trial = -1;
  std::string msg;
};

// log(sum(exp(x))) with max-shift; -inf iff every entry is -inf.
double logsumexp(std::span<const double> x);

// Exponentiate-and-normalize log weights into `out` (resized to match).
// Throws DegenerateWeights{trial_index} when the total mass is zero.
void normalize_log_weights(std::span<const double> log_w,
                           std::vector<double>& out, int trial_index);

// Effective sample size 1/sum(w^2) of normalized weights.
double effective_sample_size(std::span<const double> w);

// Systematic (low-variance) resampling: n ordered ancestor indices drawn
// with a single uniform offset u in [0,1).
std::vector<std::uint32_t> systematic_resample(std::span<const double> w,
                                               std::size_t n, double u);

double weighted_mean(std::span<const double> w, std::span<const double> x);
// Weighted SD around the weighted mean (population form, >= 0).
double weighted_sd(std::span<const double> w, std::span<const double> x);

}  // namespace curio::smc
