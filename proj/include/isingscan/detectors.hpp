#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "isingscan/mean_field.hpp"
#include "isingscan/model.hpp"
#include "isingscan/rng.hpp"
#include "isingscan/signal_classes.hpp"

namespace isingscan {

// Z_S = sum_{i in S} (x_i - centering_i) / sqrt(s) for every candidate.
struct ScanStatistics {
  std::vector<double> per_candidate;
  double z_max = 0.0;
  std::size_t argmax = 0;  // ties broken by lowest candidate index
};

// `centering` is a per-site vector (empty means zero centering). Rectangle
// families are evaluated through a d-dimensional summed-area table,
// O(n + |class|) after the table; other families by direct summation.
ScanStatistics scan_statistics(const SpinConfiguration& x, const ScanClass& cls,
                               std::span<const double> centering = {});

enum class Branch { none, positive, negative };

struct TestDecision {
  bool reject = false;
  double statistic = 0.0;
  double threshold = 0.0;
  double w = std::numeric_limits<double>::quiet_NaN();  // auxiliary draw, if randomized
  Branch branch = Branch::none;
  std::string test_name;
};

// Scan test for the high/critical regime: reject iff
// Z_max > sqrt(2 (1+delta) log|class|). Free of beta.
TestDecision high_temp_scan_test(const SpinConfiguration& x, const ScanClass& cls,
                                 double delta);
TestDecision high_temp_scan_test(const ScanStatistics& stats, std::size_t class_size,
                                 double delta);

// Randomized scan test for beta > 1: draw W ~ N(Xbar, 1/(n beta)); on W > 0
// reject iff Z_max > m sqrt(s) + t_n(delta), else iff Z_max > -m sqrt(s) +
// t_n(delta), with t_n(delta) = sqrt(2 (1+delta) (1-m^2) log|class|).
TestDecision low_temp_randomized_scan_test(const SpinConfiguration& x, const ScanClass& cls,
                                           double beta, double delta, RngStream& rng);

// Lattice scan test with susceptibility-calibrated cutoff
// sqrt(2 (1+delta) chi log|class|); `centering` as in scan_statistics.
TestDecision lattice_scan_test(const SpinConfiguration& x, const ScanClass& cls, double chi,
                               double delta, std::span<const double> centering = {});

// Conditionally centered sum test: statistic sum_i x_i - n m(beta) sign(Xbar),
// reject iff statistic > multiplier sqrt(n (1 - m^2)).
TestDecision centered_sum_test(const SpinConfiguration& x, double beta,
                               double threshold_multiplier = 3.0);

TestDecision bonferroni_combine(const TestDecision& d1, const TestDecision& d2);

}  // namespace isingscan
