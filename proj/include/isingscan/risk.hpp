#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isingscan/adaptive.hpp"
#include "isingscan/detectors.hpp"
#include "isingscan/model.hpp"
#include "isingscan/samplers.hpp"
#include "isingscan/signal_classes.hpp"
#include "isingscan/stats.hpp"
#include "isingscan/susceptibility.hpp"

namespace isingscan {

enum class TestKind {
  high_temp_scan,
  low_temp_scan,
  lattice_scan,
  centered_sum,
  bonferroni_low_centered,
  adaptive_mean_field,
  adaptive_lattice,
  stub_rate,  // rejects with a fixed probability; harness self-checks only
};

std::string to_string(TestKind kind);
TestKind parse_test_kind(const std::string& name);

enum class SamplerKind { cw_exact, glauber, swendsen_wang };

// One worst-case risk experiment: a null model, a candidate class, a test,
// a grid of signal-strength constants, and the placements the Type II error
// is maximized over. Everything is a pure function of (plan, master_seed).
struct ExperimentPlan {
  ModelSpec null_model;
  ScanClass cls;
  TestKind test = TestKind::high_temp_scan;
  SamplerKind sampler = SamplerKind::cw_exact;
  ChainConfig chain;  // MCMC samplers; per-replication seeds are derived
  double delta = 0.2;
  std::vector<double> constants{1.0};
  int type1_reps = 500;
  int type2_reps = 200;
  std::vector<std::vector<int>> placements;  // empty: first class candidate
  std::uint64_t master_seed = 0;
  int threads = 0;

  double chi = 1.0;                    // lattice test cutoff calibration
  std::vector<double> centering;       // plus-bc per-site means
  double centered_sum_multiplier = 3.0;
  ChiTable chi_table;                  // adaptive lattice
  double beta_c = kBetaC2;
  double stub_rate = 0.3;
};

struct RiskPoint {
  double c = 0.0;
  double A = 0.0;
  BinomialCi type1;
  std::vector<BinomialCi> type2_per_placement;
  BinomialCi type2_worst;
  double risk = 0.0;  // type1 + worst-case type2
  bool failed = false;
  std::string error;
};

struct RiskReport {
  std::vector<RiskPoint> points;
  double runtime_seconds = 0.0;
};

RiskReport run_risk(const ExperimentPlan& plan);

// Draw one configuration from `model` under the plan's sampler with a fully
// derived seed; exposed for calibration studies.
SpinConfiguration draw_sample(const ModelSpec& model, const ExperimentPlan& plan,
                              std::uint64_t seed);

// Run the plan's test on x; `rng` feeds any test-internal randomization.
TestDecision run_test(const ExperimentPlan& plan, const ModelSpec& model,
                      const SpinConfiguration& x, RngStream& rng);

struct SweepRow {
  double beta = 0.0;
  std::string family;
  int n = 0;
  int s = 0;
  std::size_t class_size = 0;
  double c = 0.0;
  double A = 0.0;
  std::string test;
  double delta = 0.0;
  BinomialCi type1;
  BinomialCi type2;
  double risk = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

// Grid over beta x constants; lattice plans take their per-beta cutoff from
// `chi_table` when provided. Per-cell failures are recorded, not fatal.
std::vector<SweepRow> sweep_phase_diagram(const ExperimentPlan& plan,
                                          const std::vector<double>& betas,
                                          const ChiTable* chi_table = nullptr);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace isingscan
