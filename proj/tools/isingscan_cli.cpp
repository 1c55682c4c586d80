// Command-line front end: sampling, testing, estimation, susceptibility
// sweeps, phase-diagram sweeps, and the exact-oracle self check. Every
// stochastic subcommand requires an explicit --seed; identical invocations
// produce byte-identical CSV regardless of --threads.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isingscan/adaptive.hpp"
#include "isingscan/detectors.hpp"
#include "isingscan/exact.hpp"
#include "isingscan/mean_field.hpp"
#include "isingscan/model.hpp"
#include "isingscan/plan_io.hpp"
#include "isingscan/risk.hpp"
#include "isingscan/samplers.hpp"
#include "isingscan/susceptibility.hpp"

namespace {

using namespace isingscan;

std::unique_ptr<std::ostream> open_output(const std::string& path,
                                          std::ostream** target) {
  if (path.empty() || path == "-") {
    *target = &std::cout;
    return nullptr;
  }
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw std::runtime_error("cannot open output file " + path);
  *target = file.get();
  return file;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct SampleArgs {
  std::string family = "curie_weiss";
  int n = 100, side = 16, dim = 2;
  std::string bc = "free";
  double beta = 0.5;
  double p = 0.5;
  int degree = 4;
  std::string sampler;
  int count = 10;
  std::uint64_t seed = 0;
  std::uint64_t graph_seed = 1;
  int burn_in = -1, thinning = -1;
  double signal_a = 0.0;
  std::string signal_sites;
  std::string out, emit_graph;
};

ModelSpec model_from_args(const SampleArgs& a) {
  CouplingGraph graph;
  if (a.family == "curie_weiss") {
    graph = build_complete(a.n);
  } else if (a.family == "lattice") {
    graph = build_lattice(a.side, a.dim, a.bc == "plus" ? Bc::plus : Bc::free);
  } else if (a.family == "erdos_renyi") {
    RngStream rng(a.graph_seed);
    graph = build_erdos_renyi(a.n, a.p, rng);
  } else if (a.family == "random_regular") {
    RngStream rng(a.graph_seed);
    graph = build_random_regular(a.n, a.degree, rng);
  } else {
    throw std::runtime_error("unknown family " + a.family);
  }
  SignalSpec field = SignalSpec::zero(graph.n_sites);
  if (a.signal_a > 0.0 && !a.signal_sites.empty()) {
    std::vector<int> sites;
    std::istringstream ss(a.signal_sites);
    int v;
    while (ss >> v) sites.push_back(v);
    field = SignalSpec::uniform(graph.n_sites, sites, a.signal_a);
  }
  return ModelSpec(graph, a.beta, field);
}

void write_samples_csv(const std::vector<SpinConfiguration>& samples, std::ostream& out) {
  for (const auto& x : samples) {
    for (int i = 0; i < x.n_sites(); ++i)
      out << static_cast<int>(x.spins[i]) << (i + 1 == x.n_sites() ? '\n' : ',');
  }
}

std::vector<SpinConfiguration> read_samples_csv(std::istream& in) {
  std::vector<SpinConfiguration> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SpinConfiguration x;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    int v;
    while (ss >> v) {
      if (v != 1 && v != -1) throw std::runtime_error("sample file: entries must be +-1");
      x.spins.push_back(static_cast<std::int8_t>(v));
    }
    samples.push_back(std::move(x));
  }
  return samples;
}

int cmd_sample(const SampleArgs& a) {
  const ModelSpec model = model_from_args(a);
  std::string sampler = a.sampler;
  if (sampler.empty())
    sampler = a.family == "curie_weiss" ? "exact"
                                        : (a.family == "lattice" ? "sw" : "glauber");
  std::vector<SpinConfiguration> samples;
  if (sampler == "exact") {
    CurieWeissExactSampler cw(model.n_sites(), model.beta, model.field);
    RngStream rng(a.seed);
    samples.reserve(a.count);
    for (int k = 0; k < a.count; ++k) samples.push_back(cw.draw(rng));
  } else {
    ChainConfig chain = sampler == "sw" ? ChainConfig::swendsen_wang_defaults(a.seed)
                                        : ChainConfig::glauber_defaults(a.seed);
    if (a.burn_in >= 0) chain.burn_in_sweeps = a.burn_in;
    if (a.thinning >= 1) chain.thinning_sweeps = a.thinning;
    samples = sampler == "sw" ? swendsen_wang_sample(model, chain, a.count)
                              : glauber_sample(model, chain, a.count);
  }
  std::ostream* out = nullptr;
  auto holder = open_output(a.out, &out);
  write_samples_csv(samples, *out);
  if (!a.emit_graph.empty()) {
    std::ofstream gf(a.emit_graph);
    if (!gf) throw std::runtime_error("cannot open " + a.emit_graph);
    serialize_graph(model.graph, gf);
  }
  return 0;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::positive: return "positive";
    case Branch::negative: return "negative";
    default: return "none";
  }
}

int cmd_test(const std::string& plan_path, std::uint64_t seed, int threads, int reps,
             double c, const std::string& out_path) {
  BuiltExperiment built = build_experiment(PlanConfig::parse_file(plan_path), seed, threads);
  ExperimentPlan& plan = built.plan;
  ModelSpec model = plan.null_model;
  if (c > 0.0) {
    const ThresholdFamily family = model.graph.kind == GraphKind::lattice
                                       ? ThresholdFamily::lattice
                                       : ThresholdFamily::mean_field;
    const double A =
        signal_strength_for_constant(c, plan.cls.s(), std::log(double(plan.cls.size())),
                                     model.beta, family, plan.chi);
    const auto placement =
        plan.placements.empty() ? plan.cls.candidate(0) : plan.placements.front();
    model = model.with_field(apply_signal(placement, A, model.n_sites()));
  }

  std::ostream* out = nullptr;
  auto holder = open_output(out_path, &out);
  *out << "rep,test_name,statistic,threshold,branch,reject\n";
  for (int r = 0; r < reps; ++r) {
    const SpinConfiguration x =
        draw_sample(model, plan, RngStream::child(seed, 2 * r).next_u64());
    RngStream test_rng(RngStream::child(seed, 2 * r + 1).next_u64());
    const TestDecision d = run_test(plan, model, x, test_rng);
    *out << r << ',' << d.test_name << ',' << fmt(d.statistic) << ',' << fmt(d.threshold)
         << ',' << branch_name(d.branch) << ',' << (d.reject ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_estimate_beta(const std::string& graph_path, const std::string& in_path,
                      const std::string& out_path) {
  std::ifstream gf(graph_path);
  if (!gf) throw std::runtime_error("cannot open graph file " + graph_path);
  const CouplingGraph graph = parse_graph(gf);
  std::ifstream sf(in_path);
  if (!sf) throw std::runtime_error("cannot open sample file " + in_path);
  const auto samples = read_samples_csv(sf);

  std::ostream* out = nullptr;
  auto holder = open_output(out_path, &out);
  *out << "row,beta_hat,residual,clamped\n";
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const PseudoLikelihoodFit fit = fit_beta_pseudolikelihood(samples[r], graph);
    *out << r << ',' << fmt(fit.beta_hat) << ',' << fmt(fit.residual) << ','
         << (fit.clamped_low ? "low" : (fit.clamped_high ? "high" : "no")) << '\n';
  }
  return 0;
}

int cmd_susceptibility(int side, int dim, const std::string& bc_name,
                       const std::vector<double>& betas, int s, int reps, int burn_in,
                       std::uint64_t seed, int threads, int margin,
                       const std::string& out_path) {
  const Bc bc = bc_name == "plus" ? Bc::plus : Bc::free;
  ChainConfig chain = ChainConfig::swendsen_wang_defaults(seed);
  if (burn_in >= 0) chain.burn_in_sweeps = burn_in;
  std::optional<int> margin_override;
  if (margin >= 0) margin_override = margin;
  const auto rows =
      chi_monotonicity_sweep(side, dim, bc, betas, s, chain, reps, margin_override, threads);
  std::ostream* out = nullptr;
  auto holder = open_output(out_path, &out);
  *out << "beta,chi_hat,std_error,replications,block_size,margin,violation\n";
  for (const auto& row : rows) {
    const auto& e = row.estimate;
    *out << fmt(e.beta) << ',' << fmt(e.chi_hat) << ',' << fmt(e.std_error) << ','
         << e.replications << ',' << e.block_size << ',' << e.interior_margin << ','
         << (row.monotonicity_violation ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& plan_path, std::uint64_t seed, int threads,
              const std::string& out_path) {
  BuiltExperiment built = build_experiment(PlanConfig::parse_file(plan_path), seed, threads);
  std::vector<double> betas = built.sweep_betas;
  if (betas.empty()) betas = {built.plan.null_model.beta};
  const ChiTable* table = built.plan.chi_table.empty() ? nullptr : &built.plan.chi_table;
  const auto rows = sweep_phase_diagram(built.plan, betas, table);
  std::ostream* out = nullptr;
  auto holder = open_output(out_path, &out);
  write_sweep_csv(rows, *out);
  return 0;
}

int cmd_figure1(double beta_max, int steps, const std::string& out_path) {
  std::ostream* out = nullptr;
  auto holder = open_output(out_path, &out);
  *out << "beta,m,constant\n";
  for (int k = 0; k < steps; ++k) {
    const double beta = beta_max * (k + 1) / steps;
    const MeanFieldSolution sol = solve_m(beta);
    *out << fmt(beta) << ',' << fmt(sol.m) << ',' << fmt(sharp_constant(beta)) << '\n';
  }
  return 0;
}

int cmd_oracle_check(int max_n, int instances, std::uint64_t seed) {
  const OracleCheckReport report = run_oracle_invariant_suite(max_n, instances, seed);
  std::cerr << "oracle-check: " << report.instances << " instances, " << report.failures
            << " failures\n";
  for (const auto& msg : report.messages) std::cerr << "  " << msg << "\n";
  return report.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising scan-test simulation toolkit"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "draw spin configurations");
  sample->add_option("--family", sa.family, "curie_weiss|lattice|erdos_renyi|random_regular");
  sample->add_option("--n", sa.n, "site count (non-lattice families)");
  sample->add_option("--side", sa.side, "lattice side length");
  sample->add_option("--dim", sa.dim, "lattice dimension");
  sample->add_option("--bc", sa.bc, "free|plus");
  sample->add_option("--beta", sa.beta, "inverse temperature");
  sample->add_option("--p", sa.p, "ER edge probability");
  sample->add_option("--degree", sa.degree, "regular graph degree");
  sample->add_option("--sampler", sa.sampler, "exact|glauber|sw (default per family)");
  sample->add_option("--count", sa.count, "number of configurations");
  sample->add_option("--seed", sa.seed, "rng seed")->required();
  sample->add_option("--graph-seed", sa.graph_seed, "seed for the random graph build");
  sample->add_option("--burn-in", sa.burn_in, "chain burn-in sweeps");
  sample->add_option("--thinning", sa.thinning, "chain thinning sweeps");
  sample->add_option("--signal-a", sa.signal_a, "field strength on --signal-sites");
  sample->add_option("--signal-sites", sa.signal_sites, "space-separated support sites");
  sample->add_option("--out", sa.out, "output CSV path (default stdout)");
  sample->add_option("--emit-graph", sa.emit_graph, "write the coupling graph to this path");

  std::string plan_path, out_path, graph_path, in_path;
  std::uint64_t seed = 0;
  int threads = 0, reps = 100;
  double test_c = 0.0;
  auto* test = app.add_subcommand("test", "run a detector over sampled replications");
  test->add_option("--plan", plan_path, "plan file")->required();
  test->add_option("--seed", seed, "rng seed")->required();
  test->add_option("--reps", reps, "replications");
  test->add_option("--c", test_c, "signal constant (0 = null)");
  test->add_option("--threads", threads, "worker threads (0 = all cores)");
  test->add_option("--out", out_path, "output CSV path");

  std::string eb_graph, eb_in, eb_out;
  auto* estimate = app.add_subcommand("estimate-beta", "pseudo-likelihood fits per sample row");
  estimate->add_option("--graph", eb_graph, "serialized coupling graph")->required();
  estimate->add_option("--in", eb_in, "sample CSV (rows of +-1)")->required();
  estimate->add_option("--out", eb_out, "output CSV path");

  int su_side = 64, su_dim = 2, su_s = 64, su_reps = 2000, su_burn = -1, su_margin = -1;
  std::string su_bc = "free", su_out;
  std::vector<double> su_betas;
  std::uint64_t su_seed = 0;
  int su_threads = 0;
  auto* susc = app.add_subcommand("susceptibility", "interior-block variance estimates");
  susc->add_option("--side", su_side, "lattice side");
  susc->add_option("--dim", su_dim, "lattice dimension");
  susc->add_option("--bc", su_bc, "free|plus");
  susc->add_option("--beta", su_betas, "one or more beta values")->required();
  susc->add_option("--s", su_s, "block volume");
  susc->add_option("--reps", su_reps, "replications");
  susc->add_option("--burn-in", su_burn, "SW burn-in steps");
  susc->add_option("--margin", su_margin, "interior margin (default ceil(log^2 side))");
  susc->add_option("--seed", su_seed, "rng seed")->required();
  susc->add_option("--threads", su_threads, "worker threads");
  susc->add_option("--out", su_out, "output CSV path");

  std::string sw_plan, sw_out;
  std::uint64_t sw_seed = 0;
  int sw_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "risk sweep over the plan's beta/constant grids");
  sweep->add_option("--plan", sw_plan, "plan file")->required();
  sweep->add_option("--seed", sw_seed, "master seed")->required();
  sweep->add_option("--threads", sw_threads, "worker threads");
  sweep->add_option("--out", sw_out, "output CSV path");

  double f1_beta_max = 3.0;
  int f1_steps = 100;
  std::string f1_out;
  auto* figure1 = app.add_subcommand("figure1", "CSV of (beta, m, sharp constant)");
  figure1->add_option("--beta-max", f1_beta_max, "largest beta on the grid");
  figure1->add_option("--steps", f1_steps, "grid size");
  figure1->add_option("--out", f1_out, "output CSV path");

  int oc_max_n = 8, oc_instances = 50;
  std::uint64_t oc_seed = 0;
  auto* oracle = app.add_subcommand("oracle-check", "exact-oracle invariant suite");
  oracle->add_option("--max-n", oc_max_n, "largest instance size");
  oracle->add_option("--instances", oc_instances, "number of random instances");
  oracle->add_option("--seed", oc_seed, "rng seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sample) return cmd_sample(sa);
    if (*test) return cmd_test(plan_path, seed, threads, reps, test_c, out_path);
    if (*estimate) return cmd_estimate_beta(eb_graph, eb_in, eb_out);
    if (*susc)
      return cmd_susceptibility(su_side, su_dim, su_bc, su_betas, su_s, su_reps, su_burn,
                                su_seed, su_threads, su_margin, su_out);
    if (*sweep) return cmd_sweep(sw_plan, sw_seed, sw_threads, sw_out);
    if (*figure1) return cmd_figure1(f1_beta_max, f1_steps, f1_out);
    if (*oracle) return cmd_oracle_check(oc_max_n, oc_instances, oc_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
