#pragma once

#include <cmath>
#include <utility>

namespace isingscan {

// Wilson score interval for a binomial proportion.
struct BinomialCi {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

inline BinomialCi wilson_interval(long successes, long trials, double z = 1.959963984540054) {
  BinomialCi ci;
  if (trials <= 0) return ci;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  ci.estimate = p;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  ci.lo = std::max(0.0, center - half);
  ci.hi = std::min(1.0, center + half);
  return ci;
}

}  // namespace isingscan
