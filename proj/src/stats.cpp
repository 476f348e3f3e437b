#include "dyncov/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dyncov::stats {

namespace {

constexpr double kZ95 = 1.96;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

RateEstimate exp_rate_mle(std::span<const double> samples) {
  require(samples.size() >= 2, "exp_rate_mle: need at least 2 samples");
  double sum = 0.0;
  for (double x : samples) {
    require(x > 0.0 && std::isfinite(x), "exp_rate_mle: samples must be positive and finite");
    sum += x;
  }
  const auto n = static_cast<std::int64_t>(samples.size());
  const double rate = static_cast<double>(n) / sum;
  const double rel = kZ95 / std::sqrt(static_cast<double>(n));
  return RateEstimate{rate, rate * (1.0 - rel), rate * (1.0 + rel), n};
}

double ks_exponential(std::span<const double> samples, double rate) {
  require(rate > 0.0 && std::isfinite(rate), "ks_exponential: rate must be > 0");
  require(!samples.empty(), "ks_exponential: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double x : sorted)
    require(x > 0.0 && std::isfinite(x), "ks_exponential: samples must be positive and finite");
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = -std::expm1(-rate * sorted[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - cdf;  // F_n jumps above F
    const double lower = cdf - static_cast<double>(i) / n;          // F above F_n
    d = std::max({d, upper, lower});
  }
  return d;
}

ProportionEstimate proportion_ci(std::int64_t successes, std::int64_t trials) {
  require(trials >= 1, "proportion_ci: trials must be >= 1");
  require(successes >= 0 && successes <= trials, "proportion_ci: successes out of range");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The score interval contains p by construction; the min/max guard that
  // against the last-bit rounding of center +/- half.
  return ProportionEstimate{p, std::min(std::max(0.0, center - half), p),
                            std::max(std::min(1.0, center + half), p)};
}

MeanEstimate mean_se(std::span<const double> samples) {
  require(!samples.empty(), "mean_se: empty sample");
  const auto n = static_cast<std::int64_t>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  if (n == 1) return MeanEstimate{mean, 0.0, n};
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(n - 1);
  return MeanEstimate{mean, std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace dyncov::stats
