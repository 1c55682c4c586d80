// Acceptance suite: one pass/fail line per criterion. Exit code equals the
// number of failed criteria. Pass --cli <path> to exercise the command-line
// binary in the determinism criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "isingscan/adaptive.hpp"
#include "isingscan/detectors.hpp"
#include "isingscan/exact.hpp"
#include "isingscan/mean_field.hpp"
#include "isingscan/model.hpp"
#include "isingscan/parallel.hpp"
#include "isingscan/risk.hpp"
#include "isingscan/samplers.hpp"
#include "isingscan/signal_classes.hpp"
#include "isingscan/stats.hpp"
#include "isingscan/susceptibility.hpp"

using namespace isingscan;
namespace fs = std::filesystem;

namespace {

constexpr int kThreads = 0;  // all cores

struct Check {
  std::string label;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Check> g_results;

void run_criterion(const std::string& label, const std::function<std::string()>& body) {
  Check check;
  check.label = label;
  const auto start = std::chrono::steady_clock::now();
  try {
    check.detail = body();
    check.pass = true;
  } catch (const std::exception& e) {
    check.detail = e.what();
    check.pass = false;
  }
  check.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] %s (%.1fs) %s\n", check.pass ? "PASS" : "FAIL", check.label.c_str(),
              check.seconds, check.detail.c_str());
  std::fflush(stdout);
  g_results.push_back(check);
}

[[noreturn]] void fail(const std::string& message) { throw std::runtime_error(message); }

void expect(bool ok, const std::string& message) {
  if (!ok) fail(message);
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
  return 0.5 * acc;
}

std::vector<double> empirical_pmf(const std::vector<SpinConfiguration>& draws, int n) {
  std::vector<double> pmf(n + 1, 0.0);
  for (const auto& x : draws) {
    int plus = 0;
    for (auto s : x.spins) plus += s > 0;
    pmf[plus] += 1.0;
  }
  for (auto& p : pmf) p /= static_cast<double>(draws.size());
  return pmf;
}

// rejection rate over independent replications with derived seeds
BinomialCi rejection_rate(int reps, std::uint64_t seed,
                          const std::function<SpinConfiguration(std::uint64_t)>& draw,
                          const std::function<bool(const SpinConfiguration&, RngStream&)>& test) {
  std::vector<std::uint8_t> hits(reps, 0);
  parallel_for(static_cast<std::size_t>(reps), kThreads, [&](std::size_t r) {
    const SpinConfiguration x = draw(RngStream::child(seed, 2 * r).next_u64());
    RngStream trng(RngStream::child(seed, 2 * r + 1).next_u64());
    hits[r] = test(x, trng) ? 1 : 0;
  });
  long total = 0;
  for (auto v : hits) total += v;
  return wilson_interval(total, reps);
}

SpinConfiguration sw_draw(const ModelSpec& model, std::uint64_t seed) {
  ChainConfig chain = ChainConfig::swendsen_wang_defaults(seed);
  chain.thinning_sweeps = 1;
  return swendsen_wang_sample(model, chain, 1).front();
}

std::vector<double> estimate_centering(const ModelSpec& model, int draws, std::uint64_t seed) {
  ChainConfig chain = ChainConfig::swendsen_wang_defaults(seed);
  chain.thinning_sweeps = 2;
  return estimate_null_means(model, draws, chain);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

std::string criterion1_sampler_oracle() {
  const int draws = 100000;
  double worst_tv = 0.0;
  std::string worst_name;
  auto record = [&](const std::string& name, double tv) {
    if (tv > worst_tv) {
      worst_tv = tv;
      worst_name = name;
    }
    expect(tv < 0.02, fmt("%s: TV %.4f >= 0.02", name.c_str(), tv));
  };

  for (double beta : {0.5, 1.5}) {
    const ModelSpec model(build_complete(10), beta);
    const auto oracle = magnetization_pmf(model);

    const CurieWeissExactSampler sampler(10, beta, SignalSpec::zero(10));
    RngStream rng(1001);
    std::vector<SpinConfiguration> exact_draws;
    exact_draws.reserve(draws);
    for (int k = 0; k < draws; ++k) exact_draws.push_back(sampler.draw(rng));
    record(fmt("cw_exact beta=%.1f", beta), tv_distance(empirical_pmf(exact_draws, 10), oracle));

    const auto chain_draws =
        glauber_sample(model, ChainConfig::glauber_defaults(1002), draws);
    record(fmt("glauber cw beta=%.1f", beta),
           tv_distance(empirical_pmf(chain_draws, 10), oracle));
  }

  for (Bc bc : {Bc::free, Bc::plus}) {
    const ModelSpec model(build_lattice(3, 2, bc), 0.3);
    const auto oracle = magnetization_pmf(model);
    const auto sw_draws =
        swendsen_wang_sample(model, ChainConfig::swendsen_wang_defaults(1003), draws);
    record(fmt("swendsen_wang 3x3 %s", to_string(bc).c_str()),
           tv_distance(empirical_pmf(sw_draws, 9), oracle));
    const auto gl_draws = glauber_sample(model, ChainConfig::glauber_defaults(1004), draws);
    record(fmt("glauber 3x3 %s", to_string(bc).c_str()),
           tv_distance(empirical_pmf(gl_draws, 9), oracle));
  }
  return fmt("worst TV %.4f (%s), bound 0.02", worst_tv, worst_name.c_str());
}

std::string criterion2_partition_ratio() {
  const CouplingGraph g = build_complete(12);
  const ModelSpec with(g, 0.5, SignalSpec::uniform(12, {0, 1, 2}, 0.4));
  const ModelSpec null(g, 0.5);
  const double exact = exact_ratio(with, null);
  const double integral = auxiliary_ratio_integral(12, 0.5, 3, 0.4);
  expect(std::abs(integral - exact) < 1e-6,
         fmt("n=12 mismatch: integral %.10f vs exact %.10f", integral, exact));

  const double big = auxiliary_ratio_integral(2000, 0.5, 10, 0.3);
  const double limit = std::pow(std::cosh(0.3), 10);
  const double rel = std::abs(big - limit) / limit;
  expect(rel < 0.02, fmt("n=2000 ratio %.6f vs cosh^10(0.3)=%.6f (rel %.4f)", big, limit, rel));
  return fmt("n=12 |diff| %.2e; n=2000 rel.err %.4f (bound 0.02)", std::abs(integral - exact),
             rel);
}

std::string criterion3_inequalities() {
  const OracleCheckReport report = run_oracle_invariant_suite(8, 200, 424242);
  if (!report.ok()) {
    const std::string first = report.messages.empty() ? "?" : report.messages.front();
    fail(fmt("%d/%d instances failed; first: %s", report.failures, report.instances,
             first.c_str()));
  }
  return fmt("%d randomized instances, GKS/GHS/mean identities all within tolerance",
             report.instances);
}

std::string criterion4_constants() {
  double worst_residual = 0.0;
  double prev = sharp_constant(1.0 + 4.0 / 1000.0);
  for (int k = 1; k <= 1000; ++k) {
    const double beta = 5.0 * k / 1000.0;
    const MeanFieldSolution sol = solve_m(beta);
    worst_residual = std::max(worst_residual, sol.residual);
    expect(sol.residual <= 1e-12, fmt("residual %.2e at beta=%.3f", sol.residual, beta));
    const double c = sharp_constant(beta);
    if (beta <= 1.0)
      expect(std::abs(c - std::sqrt(2.0)) <= 1e-12,
             fmt("constant %.15f != sqrt(2) at beta=%.3f", c, beta));
    if (beta > 1.0 + 4.0 / 1000.0) {
      expect(c > prev, fmt("constant not strictly increasing at beta=%.3f", beta));
      prev = c;
    }
  }
  return fmt("worst |m - tanh(beta m)| = %.2e on the 1000-point grid", worst_residual);
}

std::string criterion5_calibration() {
  std::ostringstream log;
  double worst_rate = 0.0;
  auto check_rate = [&](const std::string& name, const BinomialCi& ci) {
    worst_rate = std::max(worst_rate, ci.estimate);
    log << name << "=" << fmt("%.3f", ci.estimate) << " ";
    expect(ci.lo <= 0.05,
           fmt("%s: type I %.4f (95%% CI low %.4f) above 0.05", name.c_str(), ci.estimate,
               ci.lo));
  };
  const int cw_reps = 500;
  const int n = 2000;
  const double delta = 0.2;

  // --- Curie-Weiss configurations
  {
    const ScanClass cls = build_rectangle_class(n, 1, 100);
    const CurieWeissExactSampler sampler(n, 0.5, SignalSpec::zero(n));
    auto draw = [&](std::uint64_t s) {
      RngStream r(s);
      return sampler.draw(r);
    };
    check_rate("high_temp@0.5",
               rejection_rate(cw_reps, 50001, draw, [&](const SpinConfiguration& x, RngStream&) {
                 return high_temp_scan_test(x, cls, delta).reject;
               }));
    const CouplingGraph g = build_complete(n);
    check_rate("adaptive@0.5",
               rejection_rate(cw_reps, 50002, draw, [&](const SpinConfiguration& x, RngStream& r) {
                 AdaptiveMeanFieldOptions opts;
                 opts.delta = delta;
                 return adaptive_test_mean_field(x, cls, g, r, opts).decision.reject;
               }));
  }
  {
    // critical regime: valid for s << sqrt(n)/log n, so keep s small
    const ScanClass cls = build_rectangle_class(n, 1, 25);
    const CurieWeissExactSampler sampler(n, 1.0, SignalSpec::zero(n));
    auto draw = [&](std::uint64_t s) {
      RngStream r(s);
      return sampler.draw(r);
    };
    check_rate("high_temp@1.0",
               rejection_rate(cw_reps, 50003, draw, [&](const SpinConfiguration& x, RngStream&) {
                 return high_temp_scan_test(x, cls, delta).reject;
               }));
  }
  {
    // low temperature: s = 250 keeps the positive branch of the randomized
    // test non-degenerate (m sqrt(s) + t_n < sqrt(s))
    const ScanClass cls = build_rectangle_class(n, 1, 250);
    const CurieWeissExactSampler sampler(n, 1.5, SignalSpec::zero(n));
    const CouplingGraph g = build_complete(n);
    auto draw = [&](std::uint64_t s) {
      RngStream r(s);
      return sampler.draw(r);
    };
    check_rate("low_temp@1.5",
               rejection_rate(cw_reps, 50004, draw, [&](const SpinConfiguration& x, RngStream& r) {
                 return low_temp_randomized_scan_test(x, cls, 1.5, delta, r).reject;
               }));
    check_rate("centered_sum@1.5",
               rejection_rate(cw_reps, 50005, draw, [&](const SpinConfiguration& x, RngStream&) {
                 return centered_sum_test(x, 1.5, 3.0).reject;
               }));
    check_rate("bonferroni@1.5",
               rejection_rate(cw_reps, 50006, draw, [&](const SpinConfiguration& x, RngStream& r) {
                 const TestDecision scan = low_temp_randomized_scan_test(x, cls, 1.5, delta, r);
                 return bonferroni_combine(scan, centered_sum_test(x, 1.5, 3.0)).reject;
               }));
    check_rate("adaptive@1.5",
               rejection_rate(cw_reps, 50007, draw, [&](const SpinConfiguration& x, RngStream& r) {
                 AdaptiveMeanFieldOptions opts;
                 opts.delta = delta;
                 return adaptive_test_mean_field(x, cls, g, r, opts).decision.reject;
               }));
  }

  // --- 64x64 lattice configurations
  const int lattice_reps = 400;
  RectangleGridParams grid_params;
  grid_params.n_sites = 64 * 64;
  grid_params.dim = 2;
  grid_params.s = 64;
  const ScanClass grid = build_scan_grid(grid_params);
  for (double beta : {0.2, 0.3}) {
    const ModelSpec model(build_lattice(64, 2, Bc::free), beta);
    const auto chi = estimate_chi(model, 64, ChainConfig::swendsen_wang_defaults(60000), 1500,
                                  std::nullopt, nullptr, kThreads);
    auto draw = [&](std::uint64_t s) { return sw_draw(model, s); };
    check_rate(fmt("lattice_scan@%.1f(free)", beta),
               rejection_rate(lattice_reps, 60010 + static_cast<int>(10 * beta), draw,
                              [&](const SpinConfiguration& x, RngStream&) {
                                return lattice_scan_test(x, grid, chi.chi_hat, delta).reject;
                              }));
  }
  {
    const ModelSpec model(build_lattice(64, 2, Bc::plus), 0.8);
    const auto chi = estimate_chi(model, 64, ChainConfig::swendsen_wang_defaults(60001), 1500,
                                  std::nullopt, nullptr, kThreads);
    const std::vector<double> centering = estimate_centering(model, 1200, 60002);
    auto draw = [&](std::uint64_t s) { return sw_draw(model, s); };
    check_rate("lattice_scan@0.8(plus)",
               rejection_rate(lattice_reps, 60020, draw,
                              [&](const SpinConfiguration& x, RngStream&) {
                                return lattice_scan_test(x, grid, chi.chi_hat, delta, centering)
                                    .reject;
                              }));
  }
  {
    const ModelSpec model(build_lattice(64, 2, Bc::free), 0.3);
    const ChiTable table = build_chi_table(64, 2, Bc::free, {0.15, 0.25, 0.35}, 64,
                                           ChainConfig::swendsen_wang_defaults(60003), 700,
                                           kThreads);
    auto draw = [&](std::uint64_t s) { return sw_draw(model, s); };
    const CouplingGraph g = build_lattice(64, 2, Bc::free);
    check_rate("adaptive_lattice@0.3",
               rejection_rate(lattice_reps, 60030, draw,
                              [&](const SpinConfiguration& x, RngStream&) {
                                AdaptiveLatticeOptions opts;
                                opts.delta = delta;
                                return adaptive_test_lattice(x, grid, g, table, opts)
                                    .decision.reject;
                              }));
  }
  return fmt("all 95%% CI lower bounds <= 0.05; worst rate %.3f [%s]", worst_rate,
             log.str().c_str());
}

std::string criterion6_sharp_transition() {
  std::ostringstream log;
  const int n = 2000, s = 100;
  ExperimentPlan plan;
  plan.null_model = ModelSpec(build_complete(n), 0.5);
  plan.cls = make_disjoint_blocks(n, s, 20);
  plan.test = TestKind::high_temp_scan;
  plan.sampler = SamplerKind::cw_exact;
  plan.constants = {0.5, 2.0};
  plan.type1_reps = 3000;
  plan.type2_reps = 1200;
  plan.threads = kThreads;
  plan.master_seed = 606001;

  const RiskReport high = run_risk(plan);
  const auto& h05 = high.points[0];
  const auto& h2 = high.points[1];
  auto risk_lo = [](const RiskPoint& p) { return p.type1.lo + p.type2_worst.lo; };
  auto risk_hi = [](const RiskPoint& p) { return p.type1.hi + p.type2_worst.hi; };
  log << fmt("beta=0.5: risk(c=2)=%.3f risk(c=0.5)=%.3f; ", h2.risk, h05.risk);
  expect(h2.risk <= 0.2, fmt("beta=0.5 risk at c=2 is %.3f > 0.2", h2.risk));
  expect(h05.risk >= 0.6, fmt("beta=0.5 risk at c=0.5 is %.3f < 0.6", h05.risk));
  expect(risk_hi(h2) < risk_lo(h05),
         fmt("beta=0.5 risk CIs overlap: [%.3f,%.3f] vs [%.3f,%.3f]", risk_lo(h2), risk_hi(h2),
             risk_lo(h05), risk_hi(h05)));

  plan.null_model = ModelSpec(build_complete(n), 1.5);
  plan.test = TestKind::low_temp_scan;
  plan.master_seed = 606002;
  const RiskReport low = run_risk(plan);
  const auto& l05 = low.points[0];
  const auto& l2 = low.points[1];
  log << fmt("beta=1.5: risk(c=2)=%.3f risk(c=0.5)=%.3f", l2.risk, l05.risk);
  // directional check with the low-temperature constant: risk falls across
  // the boundary and the CIs are separated
  expect(l2.risk < l05.risk,
         fmt("beta=1.5 risk not decreasing: %.3f vs %.3f", l2.risk, l05.risk));
  expect(risk_hi(l2) < risk_lo(l05),
         fmt("beta=1.5 risk CIs overlap: [%.3f,%.3f] vs [%.3f,%.3f]", risk_lo(l2), risk_hi(l2),
             risk_lo(l05), risk_hi(l05)));
  return log.str();
}

std::string criterion7_susceptibility() {
  std::ostringstream log;
  const int reps = 1500;
  {
    const ModelSpec model(build_lattice(64, 2, Bc::free), 0.0);
    const auto est = estimate_chi(model, 64, ChainConfig::swendsen_wang_defaults(70001), reps,
                                  std::nullopt, nullptr, kThreads);
    log << fmt("chi(0)=%.3f+-%.3f; ", est.chi_hat, est.std_error);
    expect(std::abs(est.chi_hat - 1.0) <= 3.0 * est.std_error,
           fmt("chi(0) = %.4f +- %.4f not within 3 SE of 1", est.chi_hat, est.std_error));
  }
  const auto rows =
      chi_monotonicity_sweep(64, 2, Bc::free, {0.1, 0.2, 0.3}, 64,
                             ChainConfig::swendsen_wang_defaults(70002), reps, std::nullopt,
                             kThreads);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    log << fmt("chi(%.1f)=%.3f ", rows[k].estimate.beta, rows[k].estimate.chi_hat);
    expect(!rows[k].monotonicity_violation, "monotonicity violation flagged");
    if (k > 0)
      expect(rows[k].estimate.chi_hat > rows[k - 1].estimate.chi_hat,
             fmt("chi not strictly increasing at beta=%.1f", rows[k].estimate.beta));
  }
  {
    const ModelSpec plus_model(build_lattice(64, 2, Bc::plus), 0.2);
    const auto plus_est = estimate_chi(plus_model, 64,
                                       ChainConfig::swendsen_wang_defaults(70003), reps,
                                       std::nullopt, nullptr, kThreads);
    const auto& free_est = rows[1].estimate;
    const double gap = std::abs(plus_est.chi_hat - free_est.chi_hat);
    const double combined = 3.0 * (plus_est.std_error + free_est.std_error);
    log << fmt("chi_plus(0.2)=%.3f (free %.3f)", plus_est.chi_hat, free_est.chi_hat);
    expect(gap <= combined,
           fmt("free/plus gap %.4f exceeds 3 combined SE %.4f", gap, combined));
  }
  return log.str();
}

std::string criterion8_pseudolikelihood() {
  std::ostringstream log;
  {
    const int n = 5000, reps = 20;
    const CouplingGraph g = build_complete(n);
    const CurieWeissExactSampler sampler(n, 1.5, SignalSpec::zero(n));
    std::vector<double> err(reps);
    parallel_for(reps, kThreads, [&](std::size_t r) {
      RngStream rng(RngStream::child(80001, r).next_u64());
      err[r] = std::abs(fit_beta_pseudolikelihood(sampler.draw(rng), g).beta_hat - 1.5);
    });
    double mean = 0.0;
    for (double e : err) mean += e;
    mean /= reps;
    log << fmt("cw mean|bhat-1.5|=%.4f; ", mean);
    expect(mean < 0.1, fmt("CW mean error %.4f >= 0.1", mean));
  }
  {
    const int reps = 20;
    const CouplingGraph g = build_lattice(64, 2, Bc::free);
    const ModelSpec model(g, 0.3);
    std::vector<double> err(reps);
    parallel_for(reps, kThreads, [&](std::size_t r) {
      const SpinConfiguration x = sw_draw(model, RngStream::child(80002, r).next_u64());
      err[r] = std::abs(fit_beta_pseudolikelihood(x, g).beta_hat - 0.3);
    });
    double mean = 0.0;
    for (double e : err) mean += e;
    mean /= reps;
    log << fmt("lattice mean|bhat-0.3|=%.4f; ", mean);
    expect(mean < 0.05, fmt("lattice mean error %.4f >= 0.05", mean));
  }
  {
    const int n = 2000, reps = 100;
    for (double beta : {0.5, 1.5}) {
      const CurieWeissExactSampler sampler(n, beta, SignalSpec::zero(n));
      RngStream rng(80003);
      int correct = 0;
      for (int r = 0; r < reps; ++r) {
        const Regime regime = regime_classifier(sampler.draw(rng));
        if ((regime == Regime::high_beta_dependence) == (beta > 1.0)) ++correct;
      }
      log << fmt("classifier@%.1f %d/%d; ", beta, correct, reps);
      expect(correct >= 95,
             fmt("classifier accuracy %d/100 below 0.95 at beta=%.1f", correct, beta));
    }
  }
  return log.str();
}

std::string criterion9_adaptive_composition() {
  const int n = 400;
  const CouplingGraph g = build_complete(n);
  const ScanClass cls = make_disjoint_blocks(n, 25, 16);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const double beta = t % 2 == 0 ? 0.5 : 1.5;
    const CurieWeissExactSampler sampler(n, beta, SignalSpec::zero(n));
    RngStream rng(RngStream::child(90001, t).next_u64());
    const SpinConfiguration x = sampler.draw(rng);

    AdaptiveMeanFieldOptions low_opts;
    low_opts.branch = BranchOverride::force_low;
    RngStream ra(1);
    const TestDecision forced_low = adaptive_test_mean_field(x, cls, g, ra, low_opts).decision;
    const TestDecision direct_low = high_temp_scan_test(x, cls, low_opts.delta);
    expect(forced_low.reject == direct_low.reject &&
               forced_low.statistic == direct_low.statistic &&
               forced_low.threshold == direct_low.threshold,
           fmt("forced-low mismatch at configuration %d", t));

    AdaptiveMeanFieldOptions high_opts;
    high_opts.branch = BranchOverride::force_high;
    RngStream rb(1000 + t), rc(1000 + t);
    const TestDecision forced_high =
        adaptive_test_mean_field(x, cls, g, rb, high_opts).decision;
    const PseudoLikelihoodFit fit = fit_beta_pseudolikelihood(x, g);
    const TestDecision direct_high =
        fit.beta_hat > 1.0
            ? low_temp_randomized_scan_test(x, cls, fit.beta_hat, high_opts.delta, rc)
            : high_temp_scan_test(x, cls, high_opts.delta);
    const bool same_w = (std::isnan(forced_high.w) && std::isnan(direct_high.w)) ||
                        forced_high.w == direct_high.w;
    expect(forced_high.reject == direct_high.reject &&
               forced_high.statistic == direct_high.statistic &&
               forced_high.threshold == direct_high.threshold && same_w,
           fmt("forced-high mismatch at configuration %d", t));
    ++checked;
  }
  return fmt("%d stored configurations, both forced branches bit-identical", checked);
}

std::string g_cli_path;

int run_command(const std::string& command) { return std::system(command.c_str()); }

std::string criterion10_determinism() {
  expect(!g_cli_path.empty(), "CLI path not provided (--cli)");
  const fs::path dir = fs::temp_directory_path() / "isingscan_acceptance";
  fs::create_directories(dir);
  const std::string cli = "\"" + g_cli_path + "\"";
  auto path = [&](const std::string& name) { return (dir / name).string(); };

  {
    std::ofstream plan(dir / "plan.txt");
    plan << "family = curie_weiss\nn = 300\nbeta = 0.5\ns = 30\nclass = disjoint_blocks\n"
            "blocks = 10\ntest = high_temp_scan\ntype1_reps = 80\ntype2_reps = 60\n"
            "[sweep]\nbetas = 0.5 1.5\nconstants = 0.5 2\n";
  }
  struct Invocation {
    std::string name;
    std::string args_a;
    std::string args_b;
    std::string out_a;
    std::string out_b;
  };
  const std::vector<Invocation> runs = {
      {"sample",
       "sample --family curie_weiss --n 60 --beta 1.2 --sampler exact --count 25 --seed 7",
       "sample --family curie_weiss --n 60 --beta 1.2 --sampler exact --count 25 --seed 7",
       "sample_a.csv", "sample_b.csv"},
      {"sample-sw",
       "sample --family lattice --side 8 --beta 0.3 --sampler sw --count 10 --seed 9 "
       "--emit-graph " + path("graph.txt"),
       "sample --family lattice --side 8 --beta 0.3 --sampler sw --count 10 --seed 9 "
       "--emit-graph " + path("graph.txt"),
       "swdraw_a.csv", "swdraw_b.csv"},
      {"test", "test --plan " + path("plan.txt") + " --seed 11 --reps 40 --threads 1",
       "test --plan " + path("plan.txt") + " --seed 11 --reps 40 --threads 2", "test_a.csv",
       "test_b.csv"},
      {"susceptibility",
       "susceptibility --side 16 --dim 2 --bc free --beta 0.2 --beta 0.3 --s 16 --reps 80 "
       "--margin 2 --seed 13 --threads 1",
       "susceptibility --side 16 --dim 2 --bc free --beta 0.2 --beta 0.3 --s 16 --reps 80 "
       "--margin 2 --seed 13 --threads 2",
       "chi_a.csv", "chi_b.csv"},
      {"sweep", "sweep --plan " + path("plan.txt") + " --seed 17 --threads 1",
       "sweep --plan " + path("plan.txt") + " --seed 17 --threads 2", "sweep_a.csv",
       "sweep_b.csv"},
      {"figure1", "figure1 --beta-max 3 --steps 100", "figure1 --beta-max 3 --steps 100",
       "fig_a.csv", "fig_b.csv"},
      {"estimate-beta",
       "estimate-beta --graph " + path("graph.txt") + " --in " + path("swdraw_a.csv"),
       "estimate-beta --graph " + path("graph.txt") + " --in " + path("swdraw_b.csv"),
       "fit_a.csv", "fit_b.csv"},
  };
  for (const auto& run : runs) {
    const int code_a =
        run_command(cli + " " + run.args_a + " --out " + path(run.out_a) + " 2>/dev/null");
    const int code_b =
        run_command(cli + " " + run.args_b + " --out " + path(run.out_b) + " 2>/dev/null");
    expect(code_a == 0 && code_b == 0, fmt("%s: nonzero exit", run.name.c_str()));
    const std::string a = slurp(dir / run.out_a);
    const std::string b = slurp(dir / run.out_b);
    expect(!a.empty(), fmt("%s: empty output", run.name.c_str()));
    expect(a == b, fmt("%s: outputs differ between runs", run.name.c_str()));
  }
  {
    const std::string fig = slurp(dir / "fig_a.csv");
    const long rows = std::count(fig.begin(), fig.end(), '\n');
    expect(rows == 101, fmt("figure1 produced %ld lines, want 101", rows));
    expect(run_command(cli + " oracle-check --max-n 8 --instances 30 --seed 5 2>/dev/null") == 0,
           "oracle-check exited nonzero");
    expect(run_command(cli + " sweep --plan " + path("plan.txt") + " 2>/dev/null") != 0,
           "sweep without --seed should fail");
  }
  return fmt("%zu subcommands byte-identical across reruns and thread counts", runs.size());
}

}  // namespace

int main(int argc, char** argv) {
  for (int k = 1; k + 1 < argc; ++k)
    if (std::string(argv[k]) == "--cli") g_cli_path = argv[k + 1];

  run_criterion("criterion 1: sampler/oracle TV distance", criterion1_sampler_oracle);
  run_criterion("criterion 2: partition-ratio law", criterion2_partition_ratio);
  run_criterion("criterion 3: GKS/GHS inequality suite", criterion3_inequalities);
  run_criterion("criterion 4: fixed point and sharp constant", criterion4_constants);
  run_criterion("criterion 5: type I calibration", criterion5_calibration);
  run_criterion("criterion 6: sharp-transition trend", criterion6_sharp_transition);
  run_criterion("criterion 7: susceptibility", criterion7_susceptibility);
  run_criterion("criterion 8: pseudo-likelihood consistency", criterion8_pseudolikelihood);
  run_criterion("criterion 9: adaptive composition", criterion9_adaptive_composition);
  run_criterion("criterion 10: CLI determinism", criterion10_determinism);

  int failures = 0;
  for (const auto& check : g_results) failures += check.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
              g_results.size());
  return failures;
}
