#pragma once

#include <optional>

#include "isingscan/detectors.hpp"
#include "isingscan/model.hpp"
#include "isingscan/rng.hpp"
#include "isingscan/signal_classes.hpp"
#include "isingscan/susceptibility.hpp"

namespace isingscan {

enum class Regime { low_or_critical_beta, high_beta_dependence };

// |Xbar| >= 1/log(n) flags strong dependence; requires n >= 3.
Regime regime_classifier(const SpinConfiguration& x);

struct PseudoLikelihoodFit {
  double beta_hat = 0.0;
  double residual = 0.0;         // |score(beta_hat)|
  double mean_sq_local_field = 0.0;
  int iterations = 0;
  bool clamped_low = false;   // score already negative at beta = 0
  bool clamped_high = false;  // score still positive at beta_max
};

inline constexpr double kPseudoLikelihoodBetaMax = 10.0;

// Solves (1/n) sum_i m_i(x) (x_i - tanh(beta m_i(x))) = 0 with m_i = sum_j
// Q_ij x_j (working model mu = 0); the score is nonincreasing in beta so
// bisection finds the unique root, clamped to [0, beta_max] with flags.
PseudoLikelihoodFit fit_beta_pseudolikelihood(const SpinConfiguration& x,
                                              const CouplingGraph& graph);

// the raw score, exposed for tests
double pseudolikelihood_score(const SpinConfiguration& x, const CouplingGraph& graph,
                              double beta);

enum class BranchOverride { automatic, force_low, force_high };

struct AdaptiveResult {
  TestDecision decision;
  Regime regime = Regime::low_or_critical_beta;
  std::optional<PseudoLikelihoodFit> fit;
  double chi_used = 0.0;  // lattice family only
  bool near_critical = false;
};

struct AdaptiveMeanFieldOptions {
  double delta = 0.2;
  BranchOverride branch = BranchOverride::automatic;
};

// Mean-field pipeline: classifier -> beta-free scan test, or pseudo-
// likelihood fit -> randomized low-temperature scan test at m(beta_hat).
// A high-branch fit with beta_hat <= 1 collapses to the beta-free test.
AdaptiveResult adaptive_test_mean_field(const SpinConfiguration& x, const ScanClass& cls,
                                        const CouplingGraph& graph, RngStream& rng,
                                        const AdaptiveMeanFieldOptions& opts);

struct AdaptiveLatticeOptions {
  double delta = 0.2;
  double beta_c = kBetaC2;
  double guard_margin = 0.05;  // |beta_hat - beta_c| below this flags near_critical
  int pin_count = 0;           // optional +1 pinning before the fit
  std::span<const double> centering = {};
};

// Lattice pipeline: pseudo-likelihood fit, chi from the interpolation table
// at beta_hat, then the susceptibility-calibrated scan test.
AdaptiveResult adaptive_test_lattice(const SpinConfiguration& x, const ScanClass& cls,
                                     const CouplingGraph& graph, const ChiTable& chi_table,
                                     const AdaptiveLatticeOptions& opts);

}  // namespace isingscan
