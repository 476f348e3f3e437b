#pragma once

#include <cstdint>
#include <span>

namespace dyncov::stats {

/// Exponential rate MLE with a 95% normal-approximation interval.
struct RateEstimate {
  double rate;
  double ci_low;
  double ci_high;
  std::int64_t n;
};

struct MeanEstimate {
  double mean;
  double std_error;
  std::int64_t n;
};

struct ProportionEstimate {
  double p_hat;
  double ci_low;
  double ci_high;
};

/// rate = n / sum(samples), CI = rate * (1 +/- 1.96/sqrt(n)).
/// Requires n >= 2 and strictly positive samples.
RateEstimate exp_rate_mle(std::span<const double> samples);

/// One-sample Kolmogorov-Smirnov statistic against Exp(rate):
/// D = sup_x |F_n(x) - (1 - exp(-rate x))|, both one-sided gaps evaluated at
/// the sample points.
double ks_exponential(std::span<const double> samples, double rate);

/// Wilson 95% score interval for a binomial proportion.
ProportionEstimate proportion_ci(std::int64_t successes, std::int64_t trials);

/// Sample mean with standard error s/sqrt(n).
MeanEstimate mean_se(std::span<const double> samples);

}  // namespace dyncov::stats
