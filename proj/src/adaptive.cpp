#include "isingscan/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace isingscan {

Regime regime_classifier(const SpinConfiguration& x) {
  const int n = x.n_sites();
  if (n < 3) throw std::invalid_argument("regime_classifier: need n >= 3");
  return std::abs(x.mean()) >= 1.0 / std::log(static_cast<double>(n))
             ? Regime::high_beta_dependence
             : Regime::low_or_critical_beta;
}

namespace {

std::vector<double> local_magnetizations(const SpinConfiguration& x,
                                         const CouplingGraph& g) {
  const int n = g.n_sites;
  std::vector<double> m(n, 0.0);
  if (g.kind == GraphKind::complete) {
    const double total = static_cast<double>(x.total());
    for (int i = 0; i < n; ++i) m[i] = g.scale * (total - x.spins[i]);
    return m;
  }
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
      const int j = g.neighbors[k];
      acc += g.weights[k] * ((j == n) ? 1.0 : static_cast<double>(x.spins[j]));
    }
    m[i] = acc;
  }
  return m;
}

double score_from(const std::vector<double>& m, const SpinConfiguration& x, double beta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    acc += m[i] * (x.spins[i] - std::tanh(beta * m[i]));
  return acc / static_cast<double>(m.size());
}

}  // namespace

double pseudolikelihood_score(const SpinConfiguration& x, const CouplingGraph& graph,
                              double beta) {
  return score_from(local_magnetizations(x, graph), x, beta);
}

PseudoLikelihoodFit fit_beta_pseudolikelihood(const SpinConfiguration& x,
                                              const CouplingGraph& graph) {
  if (x.n_sites() != graph.n_sites)
    throw std::invalid_argument("fit_beta_pseudolikelihood: size mismatch");
  const std::vector<double> m = local_magnetizations(x, graph);
  double msq = 0.0;
  for (double v : m) msq += v * v;
  msq /= static_cast<double>(m.size());
  if (!(msq > 0.0))
    throw std::runtime_error("fit_beta_pseudolikelihood: degenerate local fields");

  PseudoLikelihoodFit fit;
  fit.mean_sq_local_field = msq;

  // the score is nonincreasing in beta (derivative -(1/n) sum m_i^2 sech^2)
  double lo = 0.0, hi = kPseudoLikelihoodBetaMax;
  const double at_zero = score_from(m, x, lo);
  if (at_zero <= 0.0) {
    fit.beta_hat = 0.0;
    fit.residual = std::abs(at_zero);
    fit.clamped_low = true;
    return fit;
  }
  const double at_max = score_from(m, x, hi);
  if (at_max >= 0.0) {
    fit.beta_hat = hi;
    fit.residual = std::abs(at_max);
    fit.clamped_high = true;
    return fit;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (score_from(m, x, mid) > 0.0 ? lo : hi) = mid;
    ++fit.iterations;
  }
  fit.beta_hat = 0.5 * (lo + hi);
  fit.residual = std::abs(score_from(m, x, fit.beta_hat));
  return fit;
}

AdaptiveResult adaptive_test_mean_field(const SpinConfiguration& x, const ScanClass& cls,
                                        const CouplingGraph& graph, RngStream& rng,
                                        const AdaptiveMeanFieldOptions& opts) {
  AdaptiveResult result;
  result.regime = regime_classifier(x);
  bool high = result.regime == Regime::high_beta_dependence;
  if (opts.branch == BranchOverride::force_low) high = false;
  if (opts.branch == BranchOverride::force_high) high = true;

  if (!high) {
    result.decision = high_temp_scan_test(x, cls, opts.delta);
    return result;
  }
  result.fit = fit_beta_pseudolikelihood(x, graph);
  if (result.fit->beta_hat <= 1.0) {
    // m(beta_hat) = 0 collapses the randomized test to the beta-free one
    result.decision = high_temp_scan_test(x, cls, opts.delta);
    return result;
  }
  result.decision =
      low_temp_randomized_scan_test(x, cls, result.fit->beta_hat, opts.delta, rng);
  return result;
}

AdaptiveResult adaptive_test_lattice(const SpinConfiguration& x, const ScanClass& cls,
                                     const CouplingGraph& graph, const ChiTable& chi_table,
                                     const AdaptiveLatticeOptions& opts) {
  AdaptiveResult result;
  result.regime = regime_classifier(x);

  SpinConfiguration fit_input = x;
  const int pins = std::min<int>(opts.pin_count, fit_input.n_sites());
  for (int i = 0; i < pins; ++i) fit_input.spins[i] = +1;
  result.fit = fit_beta_pseudolikelihood(fit_input, graph);

  result.near_critical = std::abs(result.fit->beta_hat - opts.beta_c) < opts.guard_margin;
  result.chi_used = chi_table.at(result.fit->beta_hat);
  result.decision = lattice_scan_test(x, cls, result.chi_used, opts.delta, opts.centering);
  return result;
}

}  // namespace isingscan
