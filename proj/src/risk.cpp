#include "isingscan/risk.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "isingscan/mean_field.hpp"
#include "isingscan/parallel.hpp"

namespace isingscan {

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::high_temp_scan: return "high_temp_scan";
    case TestKind::low_temp_scan: return "low_temp_scan";
    case TestKind::lattice_scan: return "lattice_scan";
    case TestKind::centered_sum: return "centered_sum";
    case TestKind::bonferroni_low_centered: return "bonferroni_low_centered";
    case TestKind::adaptive_mean_field: return "adaptive_mean_field";
    case TestKind::adaptive_lattice: return "adaptive_lattice";
    case TestKind::stub_rate: return "stub_rate";
  }
  return "?";
}

TestKind parse_test_kind(const std::string& name) {
  for (TestKind k :
       {TestKind::high_temp_scan, TestKind::low_temp_scan, TestKind::lattice_scan,
        TestKind::centered_sum, TestKind::bonferroni_low_centered,
        TestKind::adaptive_mean_field, TestKind::adaptive_lattice, TestKind::stub_rate})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown test kind: " + name);
}

namespace {

// stable per-(cell, replication, purpose) seeds
std::uint64_t derived_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep,
                           std::uint64_t purpose) {
  return RngStream::child(master, (cell << 24) ^ (rep << 2) ^ purpose).next_u64();
}

struct PreparedSampler {
  const ExperimentPlan* plan;
  const ModelSpec* model;
  std::optional<CurieWeissExactSampler> cw;

  PreparedSampler(const ExperimentPlan& p, const ModelSpec& m) : plan(&p), model(&m) {
    if (p.sampler == SamplerKind::cw_exact) {
      if (m.graph.kind != GraphKind::complete)
        throw std::invalid_argument("cw_exact sampler requires the complete graph");
      cw.emplace(m.n_sites(), m.beta, m.field);
    }
  }

  SpinConfiguration draw(std::uint64_t seed) const {
    if (cw) {
      RngStream rng(seed);
      return cw->draw(rng);
    }
    ChainConfig chain = plan->chain;
    chain.seed = seed;
    if (plan->sampler == SamplerKind::swendsen_wang)
      return swendsen_wang_sample(*model, chain, 1).front();
    return glauber_sample(*model, chain, 1).front();
  }
};

}  // namespace

SpinConfiguration draw_sample(const ModelSpec& model, const ExperimentPlan& plan,
                              std::uint64_t seed) {
  return PreparedSampler(plan, model).draw(seed);
}

TestDecision run_test(const ExperimentPlan& plan, const ModelSpec& model,
                      const SpinConfiguration& x, RngStream& rng) {
  switch (plan.test) {
    case TestKind::high_temp_scan:
      return high_temp_scan_test(x, plan.cls, plan.delta);
    case TestKind::low_temp_scan:
      return low_temp_randomized_scan_test(x, plan.cls, model.beta, plan.delta, rng);
    case TestKind::lattice_scan:
      return lattice_scan_test(x, plan.cls, plan.chi, plan.delta, plan.centering);
    case TestKind::centered_sum:
      return centered_sum_test(x, model.beta, plan.centered_sum_multiplier);
    case TestKind::bonferroni_low_centered: {
      const TestDecision scan =
          low_temp_randomized_scan_test(x, plan.cls, model.beta, plan.delta, rng);
      const TestDecision sum = centered_sum_test(x, model.beta, plan.centered_sum_multiplier);
      return bonferroni_combine(scan, sum);
    }
    case TestKind::adaptive_mean_field: {
      AdaptiveMeanFieldOptions opts;
      opts.delta = plan.delta;
      return adaptive_test_mean_field(x, plan.cls, model.graph, rng, opts).decision;
    }
    case TestKind::adaptive_lattice: {
      AdaptiveLatticeOptions opts;
      opts.delta = plan.delta;
      opts.beta_c = plan.beta_c;
      opts.centering = plan.centering;
      return adaptive_test_lattice(x, plan.cls, model.graph, plan.chi_table, opts).decision;
    }
    case TestKind::stub_rate: {
      TestDecision d;
      d.test_name = "stub_rate";
      d.statistic = rng.uniform();
      d.threshold = 1.0 - plan.stub_rate;
      d.reject = d.statistic > d.threshold;
      return d;
    }
  }
  throw std::logic_error("run_test: bad kind");
}

namespace {

long count_rejections(const ExperimentPlan& plan, const ModelSpec& model, int reps,
                      std::uint64_t cell) {
  PreparedSampler sampler(plan, model);
  std::vector<std::uint8_t> rejected(reps, 0);
  parallel_for(static_cast<std::size_t>(reps), plan.threads, [&](std::size_t r) {
    const SpinConfiguration x =
        sampler.draw(derived_seed(plan.master_seed, cell, r, 0));
    RngStream test_rng(derived_seed(plan.master_seed, cell, r, 1));
    rejected[r] = run_test(plan, model, x, test_rng).reject ? 1 : 0;
  });
  long hits = 0;
  for (auto v : rejected) hits += v;
  return hits;
}

double log_class_size(const ExperimentPlan& plan) {
  return std::log(static_cast<double>(plan.cls.size()));
}

}  // namespace

RiskReport run_risk(const ExperimentPlan& plan) {
  const auto start = std::chrono::steady_clock::now();
  if (plan.type1_reps < 1 || plan.type2_reps < 1)
    throw std::invalid_argument("run_risk: need at least one replication");
  for (double c : plan.constants)
    if (c < 0.0) throw std::invalid_argument("run_risk: constants must be nonnegative");

  std::vector<std::vector<int>> placements = plan.placements;
  if (placements.empty()) placements.push_back(plan.cls.candidate(0));

  const ThresholdFamily family = plan.null_model.graph.kind == GraphKind::lattice
                                     ? ThresholdFamily::lattice
                                     : ThresholdFamily::mean_field;

  // the null does not depend on c; simulate Type I once
  const BinomialCi type1 =
      wilson_interval(count_rejections(plan, plan.null_model, plan.type1_reps, 0),
                      plan.type1_reps);

  RiskReport report;
  for (std::size_t ci = 0; ci < plan.constants.size(); ++ci) {
    RiskPoint point;
    point.c = plan.constants[ci];
    point.type1 = type1;
    try {
      point.A = signal_strength_for_constant(point.c, plan.cls.s(), log_class_size(plan),
                                             plan.null_model.beta, family, plan.chi);
      for (std::size_t pi = 0; pi < placements.size(); ++pi) {
        const ModelSpec alt = plan.null_model.with_field(
            apply_signal(placements[pi], point.A, plan.null_model.n_sites()));
        const std::uint64_t cell = 1 + ci * (placements.size() + 1) + pi;
        const long rejects = count_rejections(plan, alt, plan.type2_reps, cell);
        const BinomialCi miss = wilson_interval(plan.type2_reps - rejects, plan.type2_reps);
        point.type2_per_placement.push_back(miss);
        if (point.type2_per_placement.size() == 1 ||
            miss.estimate > point.type2_worst.estimate)
          point.type2_worst = miss;
      }
      point.risk = point.type1.estimate + point.type2_worst.estimate;
    } catch (const std::exception& e) {
      point.failed = true;
      point.error = e.what();
    }
    report.points.push_back(std::move(point));
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<SweepRow> sweep_phase_diagram(const ExperimentPlan& plan,
                                          const std::vector<double>& betas,
                                          const ChiTable* chi_table) {
  std::vector<SweepRow> rows;
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    ExperimentPlan cell = plan;
    cell.null_model = ModelSpec(plan.null_model.graph, betas[bi]);
    cell.master_seed = RngStream::child(plan.master_seed, 7700001ULL + bi).next_u64();
    if (chi_table) cell.chi = chi_table->at(betas[bi]);
    SweepRow base;
    base.beta = betas[bi];
    base.family = to_string(plan.null_model.graph.kind);
    base.n = plan.null_model.n_sites();
    base.s = plan.cls.s();
    base.class_size = plan.cls.size();
    base.test = to_string(plan.test);
    base.delta = plan.delta;
    base.seed = cell.master_seed;
    try {
      const RiskReport report = run_risk(cell);
      for (const auto& point : report.points) {
        SweepRow row = base;
        row.c = point.c;
        row.A = point.A;
        row.type1 = point.type1;
        row.type2 = point.type2_worst;
        row.risk = point.risk;
        row.failed = point.failed;
        row.error = point.error;
        rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      SweepRow row = base;
      row.failed = true;
      row.error = e.what();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "beta,family,n,s,class_size,c,A,test,delta,type1,type1_lo,type1_hi,"
         "type2,type2_lo,type2_hi,risk,seed\n";
  char buf[512];
  for (const auto& r : rows) {
    if (r.failed) {
      std::snprintf(buf, sizeof buf, "%.6g,%s,%d,%d,%zu,%.6g,nan,%s,%.6g,error:%s\n",
                    r.beta, r.family.c_str(), r.n, r.s, r.class_size, r.c, r.test.c_str(),
                    r.delta, r.error.c_str());
      out << buf;
      continue;
    }
    std::snprintf(buf, sizeof buf,
                  "%.6g,%s,%d,%d,%zu,%.6g,%.6g,%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%llu\n",
                  r.beta, r.family.c_str(), r.n, r.s, r.class_size, r.c, r.A, r.test.c_str(),
                  r.delta, r.type1.estimate, r.type1.lo, r.type1.hi, r.type2.estimate,
                  r.type2.lo, r.type2.hi, r.risk,
                  static_cast<unsigned long long>(r.seed));
    out << buf;
  }
}

}  // namespace isingscan
