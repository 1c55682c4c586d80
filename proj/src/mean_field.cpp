#include "isingscan/mean_field.hpp"

#include <stdexcept>

namespace isingscan {

MeanFieldSolution solve_m(double beta) {
  if (beta < 0.0) throw std::invalid_argument("solve_m: beta must be nonnegative");
  MeanFieldSolution sol;
  sol.beta = beta;
  if (beta <= 1.0 + 1e-15) return sol;  // m = 0 is the only nonnegative root

  // g(m) = tanh(beta m) - m is positive on (0, m*) and negative above;
  // bisection is immune to the vanishing derivative near beta = 1.
  auto g = [beta](double m) { return std::tanh(beta * m) - m; };
  double lo = 1e-8, hi = 1.0;
  if (g(lo) <= 0.0) return sol;  // root below resolution; treat as critical
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  sol.m = 0.5 * (lo + hi);
  sol.residual = std::abs(g(sol.m));
  return sol;
}

double sharp_constant(double beta) {
  const MeanFieldSolution sol = solve_m(beta);
  return std::sqrt(2.0) * std::cosh(beta * sol.m);
}

ScanCutoff scan_cutoff(const CutoffSpec& spec, double beta) {
  if (spec.delta <= 0.0) throw std::invalid_argument("scan_cutoff: delta must be positive");
  if (spec.log_class_size <= 0.0)
    throw std::invalid_argument("scan_cutoff: log_class_size must be positive");
  ScanCutoff cut;
  if (spec.regime == CutoffRegime::high_or_critical) {
    cut.offset = std::sqrt(2.0 * (1.0 + spec.delta) * spec.log_class_size);
    return cut;
  }
  if (beta <= 1.0)
    throw std::invalid_argument("scan_cutoff: low regime requires beta > 1");
  const double m = solve_m(beta).m;
  cut.shift = m * std::sqrt(static_cast<double>(spec.s));
  cut.offset = std::sqrt(2.0 * (1.0 + spec.delta) * (1.0 - m * m) * spec.log_class_size);
  return cut;
}

double signal_strength_for_constant(double c, long s, double log_class_size, double beta,
                                    ThresholdFamily family, double chi) {
  if (c < 0.0) throw std::invalid_argument("signal_strength_for_constant: c must be >= 0");
  if (s <= 0) throw std::invalid_argument("signal_strength_for_constant: s must be positive");
  if (c == 0.0) return 0.0;
  const double constant = family == ThresholdFamily::mean_field
                              ? sharp_constant(beta)
                              : std::sqrt(2.0 * chi);
  const double arg = c * constant * std::sqrt(log_class_size / static_cast<double>(s));
  if (arg >= 1.0)
    throw std::invalid_argument("signal_strength_for_constant: infeasible signal (tanh arg >= 1)");
  return std::atanh(arg);
}

}  // namespace isingscan
