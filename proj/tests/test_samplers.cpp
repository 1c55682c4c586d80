#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "isingscan/exact.hpp"
#include "isingscan/samplers.hpp"

using namespace isingscan;

namespace {

// empirical pmf of the plus-spin count
std::vector<double> empirical_magnetization_pmf(const std::vector<SpinConfiguration>& draws,
                                                int n) {
  std::vector<double> pmf(n + 1, 0.0);
  for (const auto& x : draws) {
    int plus = 0;
    for (auto s : x.spins) plus += s > 0;
    pmf[plus] += 1.0;
  }
  for (auto& p : pmf) p /= draws.size();
  return pmf;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
  return 0.5 * acc;
}

int count_components(int n_vertices, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n_vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  int comps = n_vertices;
  for (auto [i, j] : edges) {
    const int a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps;
}

}  // namespace

TEST_SUITE("samplers") {

TEST_CASE("seeded determinism") {
  const ModelSpec cw(build_complete(12), 0.8);
  const ChainConfig chain = ChainConfig::glauber_defaults(42);
  const auto a = glauber_sample(cw, chain, 5);
  const auto b = glauber_sample(cw, chain, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].spins == b[k].spins);

  const ModelSpec lat(build_lattice(4, 2, Bc::plus), 0.4);
  const ChainConfig sw = ChainConfig::swendsen_wang_defaults(7);
  const auto c = swendsen_wang_sample(lat, sw, 4);
  const auto d = swendsen_wang_sample(lat, sw, 4);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(c[k].spins == d[k].spins);

  const CurieWeissExactSampler sampler(30, 1.4, SignalSpec::zero(30));
  RngStream r1(9), r2(9);
  for (int k = 0; k < 5; ++k) CHECK(sampler.draw(r1).spins == sampler.draw(r2).spins);
}

TEST_CASE("glauber at beta=0 gives independent tanh(mu) marginals") {
  const int n = 6;
  const SignalSpec field = SignalSpec::from_values(n, {0, 1, 2}, {0.0, 0.5, 1.5});
  const ModelSpec model(build_complete(n), 0.0, field);
  ChainConfig chain = ChainConfig::glauber_defaults(31);
  chain.burn_in_sweeps = 20;
  chain.thinning_sweeps = 1;
  const int draws = 20000;
  const auto samples = glauber_sample(model, chain, draws);
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (const auto& x : samples) mean += x.spins[i];
    mean /= draws;
    const double expect = std::tanh(field.at(i));
    const double sigma = std::sqrt((1.0 - expect * expect) / draws);
    CHECK(std::abs(mean - expect) < 3.5 * sigma);
  }
}

TEST_CASE("glauber matches the exact magnetization pmf") {
  const ModelSpec model(build_complete(10), 0.5);
  ExactOptions opts;
  opts.want_cov = false;
  const auto exact = magnetization_pmf(model);
  ChainConfig chain = ChainConfig::glauber_defaults(77);
  const auto draws = glauber_sample(model, chain, 20000);
  CHECK(tv_distance(empirical_magnetization_pmf(draws, 10), exact) < 0.03);
}

TEST_CASE("curie-weiss exact sampler") {
  SUBCASE("matches the oracle pmf at beta=0.5 and beta=1.5") {
    for (double beta : {0.5, 1.5}) {
      const ModelSpec model(build_complete(10), beta);
      const auto exact = magnetization_pmf(model);
      const CurieWeissExactSampler sampler(10, beta, SignalSpec::zero(10));
      RngStream rng(1234);
      std::vector<SpinConfiguration> draws;
      draws.reserve(50000);
      for (int k = 0; k < 50000; ++k) draws.push_back(sampler.draw(rng));
      CHECK(tv_distance(empirical_magnetization_pmf(draws, 10), exact) < 0.02);
    }
  }
  SUBCASE("low-temperature concentration at beta=2") {
    const CurieWeissExactSampler sampler(1000, 2.0, SignalSpec::zero(1000));
    RngStream rng(5);
    int small = 0;
    double mean_abs = 0.0;
    const int draws = 2000;
    for (int k = 0; k < draws; ++k) {
      const double xbar = sampler.draw(rng).mean();
      if (std::abs(xbar) < 0.5) ++small;
      mean_abs += std::abs(xbar);
    }
    CHECK(small < 0.01 * draws);
    CHECK(mean_abs / draws == doctest::Approx(0.9575).epsilon(0.02));
  }
  SUBCASE("beta=0 is a fair coin") {
    const CurieWeissExactSampler sampler(50, 0.0, SignalSpec::zero(50));
    RngStream rng(8);
    double total = 0.0;
    const int draws = 10000;
    for (int k = 0; k < draws; ++k) total += sampler.draw(rng).mean();
    CHECK(std::abs(total / draws) < 3.0 / std::sqrt(50.0 * draws));
  }
}

TEST_CASE("glauber kernel satisfies detailed balance") {
  RngStream grng(3);
  const ModelSpec models[] = {
      ModelSpec(build_complete(6), 0.8, SignalSpec::uniform(6, {1, 3}, 0.4)),
      ModelSpec(build_erdos_renyi(6, 0.5, grng), 1.2),
      ModelSpec(build_lattice(2, 2, Bc::plus), 0.9)};
  for (const auto& model : models) {
    const int n = model.n_sites();
    ExactOptions opts;
    opts.want_cov = false;
    opts.want_pmf = true;
    const ExactSummary sum = exact_summary(model, opts);
    SpinConfiguration x;
    x.spins.resize(n);
    for (std::uint64_t bits = 0; bits < sum.pmf.size(); ++bits) {
      for (int i = 0; i < n; ++i) x.spins[i] = (bits >> i) & 1 ? +1 : -1;
      for (int i = 0; i < n; ++i) {
        // heat-bath move at site i: target spin drawn from the conditional
        const double p_plus = 0.5 * (1.0 + std::tanh(local_field(model, x, i)));
        const std::uint64_t flipped = bits ^ (1ULL << i);
        const double to_flip = (bits >> i) & 1 ? 1.0 - p_plus : p_plus;
        const double back = (bits >> i) & 1 ? p_plus : 1.0 - p_plus;
        CHECK(sum.pmf[bits] * to_flip ==
              doctest::Approx(sum.pmf[flipped] * back).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("swendsen-wang matches the oracle on the 3x3 lattice") {
  SUBCASE("free bc magnetization pmf") {
    const ModelSpec model(build_lattice(3, 2, Bc::free), 0.3);
    const auto exact = magnetization_pmf(model);
    const auto draws =
        swendsen_wang_sample(model, ChainConfig::swendsen_wang_defaults(19), 20000);
    CHECK(tv_distance(empirical_magnetization_pmf(draws, 9), exact) < 0.03);
  }
  SUBCASE("plus bc per-site means") {
    const ModelSpec model(build_lattice(3, 2, Bc::plus), 0.3);
    const ExactSummary sum = exact_summary(model);
    const int draws = 20000;
    const auto samples =
        swendsen_wang_sample(model, ChainConfig::swendsen_wang_defaults(23), draws);
    for (int i = 0; i < 9; ++i) {
      double mean = 0.0;
      for (const auto& x : samples) mean += x.spins[i];
      mean /= draws;
      const double sigma = std::sqrt((1.0 - sum.means[i] * sum.means[i]) / draws);
      CHECK(std::abs(mean - sum.means[i]) < 4.0 * sigma);
      CHECK(sum.means[i] > 0.0);  // the ghost pulls every site up
    }
  }
  SUBCASE("beta=0 gives iid signs") {
    const ModelSpec model(build_lattice(3, 2, Bc::free), 0.0);
    ChainConfig chain = ChainConfig::swendsen_wang_defaults(3);
    chain.burn_in_sweeps = 0;
    chain.thinning_sweeps = 1;
    const int draws = 20000;
    const auto samples = swendsen_wang_sample(model, chain, draws);
    double mean = 0.0;
    for (const auto& x : samples) mean += x.total();
    mean /= draws;
    CHECK(std::abs(mean) < 3.0 * std::sqrt(9.0 / draws));
  }
  SUBCASE("non-lattice model is rejected") {
    const ModelSpec cw(build_complete(8), 0.5);
    CHECK_THROWS_AS(swendsen_wang_sample(cw, ChainConfig::swendsen_wang_defaults(1), 1),
                    std::invalid_argument);
  }
}

TEST_CASE("one swendsen-wang step preserves the target") {
  // exact draws in, one SW step, two-sample chi-square on the magnetization
  const ModelSpec model(build_lattice(3, 2, Bc::free), 0.35);
  ExactOptions opts;
  opts.want_cov = false;
  opts.want_pmf = true;
  const ExactSummary sum = exact_summary(model, opts);
  std::vector<double> cdf(sum.pmf.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < sum.pmf.size(); ++k) cdf[k] = (acc += sum.pmf[k]);

  RngStream rng(2718);
  const int draws = 100000;
  std::vector<long> before(10, 0), after(10, 0);
  SpinConfiguration x;
  x.spins.resize(9);
  for (int t = 0; t < draws; ++t) {
    const double u = rng.uniform();
    const std::size_t bits =
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    int plus = 0;
    for (int i = 0; i < 9; ++i) {
      x.spins[i] = (bits >> i) & 1 ? +1 : -1;
      plus += (bits >> i) & 1;
    }
    ++before[plus];
    swendsen_wang_step(model, x, rng);
    plus = 0;
    for (int i = 0; i < 9; ++i) plus += x.spins[i] > 0;
    ++after[plus];
  }
  double chi2 = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double denom = static_cast<double>(before[k] + after[k]);
    if (denom > 0) {
      const double diff = static_cast<double>(before[k] - after[k]);
      chi2 += diff * diff / denom;
    }
  }
  CHECK(chi2 < 21.666);  // chi-square 0.99 quantile, 9 dof
}

TEST_CASE("fk bond half-step") {
  SUBCASE("beta=0 opens nothing") {
    const ModelSpec model(build_lattice(3, 2, Bc::free), 0.0);
    RngStream rng(1);
    const auto bonds = fk_ising_bond_sample(model, SpinConfiguration::all_plus(9), rng);
    CHECK(bonds.open_count() == 0);
  }
  SUBCASE("large beta opens every satisfied bond") {
    const ModelSpec model(build_lattice(3, 2, Bc::free), 40.0);
    RngStream rng(1);
    const auto bonds = fk_ising_bond_sample(model, SpinConfiguration::all_plus(9), rng);
    CHECK(bonds.open_count() == model.graph.edge_count());
  }
  SUBCASE("2x2 open-count distribution equals the random-cluster marginal") {
    const double beta = 0.6;
    const ModelSpec model(build_lattice(2, 2, Bc::free), beta);
    const auto edges = model.graph.edge_list();
    REQUIRE(edges.size() == 4);
    const double p = 1.0 - std::exp(-2.0 * beta);

    // composed distribution: exact spin measure, then conditional bonds
    ExactOptions opts;
    opts.want_cov = false;
    opts.want_pmf = true;
    const ExactSummary sum = exact_summary(model, opts);
    std::vector<double> composed(5, 0.0);
    for (std::uint64_t bits = 0; bits < 16; ++bits) {
      std::vector<int> spin(4);
      for (int i = 0; i < 4; ++i) spin[i] = (bits >> i) & 1 ? +1 : -1;
      std::vector<int> satisfied;
      for (std::size_t e = 0; e < 4; ++e)
        if (spin[edges[e].i] == spin[edges[e].j]) satisfied.push_back(static_cast<int>(e));
      for (std::uint64_t sub = 0; sub < (1ULL << satisfied.size()); ++sub) {
        const int open = std::popcount(sub);
        const double prob = std::pow(p, open) *
                            std::pow(1.0 - p, static_cast<double>(satisfied.size()) - open);
        composed[open] += sum.pmf[bits] * prob;
      }
    }

    // direct random-cluster measure phi(w) prop to p^o (1-p)^(4-o) 2^k(w)
    std::vector<double> direct(5, 0.0);
    double z = 0.0;
    for (std::uint64_t w = 0; w < 16; ++w) {
      std::vector<std::pair<int, int>> open_edges;
      for (std::size_t e = 0; e < 4; ++e)
        if ((w >> e) & 1) open_edges.push_back({edges[e].i, edges[e].j});
      const int open = static_cast<int>(open_edges.size());
      const double weight = std::pow(p, open) * std::pow(1.0 - p, 4.0 - open) *
                            std::pow(2.0, count_components(4, open_edges));
      direct[open] += weight;
      z += weight;
    }
    for (auto& v : direct) v /= z;
    for (int k = 0; k <= 4; ++k)
      CHECK(composed[k] == doctest::Approx(direct[k]).epsilon(1e-12));

    // and the sampler agrees empirically
    RngStream rng(77);
    std::vector<double> cdf(16);
    double acc = 0.0;
    for (int bits = 0; bits < 16; ++bits) cdf[bits] = (acc += sum.pmf[bits]);
    std::vector<double> empirical(5, 0.0);
    const int draws = 40000;
    SpinConfiguration x;
    x.spins.resize(4);
    for (int t = 0; t < draws; ++t) {
      const std::size_t bits =
          std::lower_bound(cdf.begin(), cdf.end(), rng.uniform()) - cdf.begin();
      for (int i = 0; i < 4; ++i) x.spins[i] = (bits >> i) & 1 ? +1 : -1;
      empirical[fk_ising_bond_sample(model, x, rng).open_count()] += 1.0;
    }
    for (auto& v : empirical) v /= draws;
    for (int k = 0; k <= 4; ++k) {
      const double sigma = std::sqrt(direct[k] * (1 - direct[k]) / draws) + 1e-9;
      CHECK(std::abs(empirical[k] - direct[k]) < 4.0 * sigma);
    }
  }
}

TEST_CASE("auxiliary density modes sit at the magnetization roots") {
  // beta > 1, mu = 0: symmetric modes near +-m(beta)
  const AuxiliaryDensity bimodal(500, 1.5, SignalSpec::zero(500));
  REQUIRE(bimodal.modes().size() == 2);
  CHECK(bimodal.modes()[0] == doctest::Approx(-0.8585596366).epsilon(1e-6));
  CHECK(bimodal.modes()[1] == doctest::Approx(+0.8585596366).epsilon(1e-6));

  // beta < 1: a single mode at the origin
  const AuxiliaryDensity unimodal(500, 0.5, SignalSpec::zero(500));
  REQUIRE(unimodal.modes().size() == 1);
  CHECK(std::abs(unimodal.modes()[0]) < 1e-6);
}

TEST_CASE("swendsen-wang handles a nonzero field") {
  // per-site means against the oracle with a strong field on two sites
  const CouplingGraph g = build_lattice(3, 2, Bc::free);
  const ModelSpec model(g, 0.3, SignalSpec::uniform(9, {0, 4}, 0.7));
  const ExactSummary sum = exact_summary(model);
  const int draws = 20000;
  const auto samples =
      swendsen_wang_sample(model, ChainConfig::swendsen_wang_defaults(29), draws);
  for (int i = 0; i < 9; ++i) {
    double mean = 0.0;
    for (const auto& x : samples) mean += x.spins[i];
    mean /= draws;
    const double sigma = std::sqrt((1.0 - sum.means[i] * sum.means[i]) / draws);
    CHECK(std::abs(mean - sum.means[i]) < 4.5 * sigma);
  }
  CHECK(sum.means[0] > 0.3);  // the field visibly tilts its own sites
}

TEST_CASE("random-scan sweep order") {
  const SignalSpec field = SignalSpec::from_values(5, {1, 3}, {0.4, 1.1});
  const ModelSpec model(build_complete(5), 0.0, field);
  ChainConfig chain = ChainConfig::glauber_defaults(59);
  chain.sweep_order = SweepOrder::random_scan;
  chain.burn_in_sweeps = 20;
  chain.thinning_sweeps = 2;
  const int draws = 20000;
  const auto samples = glauber_sample(model, chain, draws);
  for (int i = 0; i < 5; ++i) {
    double mean = 0.0;
    for (const auto& x : samples) mean += x.spins[i];
    mean /= draws;
    const double expect = std::tanh(field.at(i));
    CHECK(std::abs(mean - expect) < 4.0 * std::sqrt((1.0 - expect * expect) / draws));
  }
  // deterministic under a fixed seed like the sequential order
  const auto again = glauber_sample(model, chain, 3);
  const auto again2 = glauber_sample(model, chain, 3);
  for (int k = 0; k < 3; ++k) CHECK(again[k].spins == again2[k].spins);
}

TEST_CASE("auxiliary construction decouples the spins") {
  // conditionally on W in a narrow bin the spins are iid
  const int n = 40;
  const CurieWeissExactSampler sampler(n, 1.3, SignalSpec::zero(n));
  const double m = 0.7;  // near m(1.3) ~ 0.71; any narrow bin works
  RngStream rng(909);
  double s0 = 0, s1 = 0, s01 = 0;
  long hits = 0;
  for (int t = 0; t < 60000; ++t) {
    const double w = sampler.draw_w(rng);
    SpinConfiguration x;
    x.spins.resize(n);
    for (int i = 0; i < n; ++i)
      x.spins[i] = static_cast<std::int8_t>(rng.spin(0.5 * (1.0 + std::tanh(1.3 * w))));
    if (std::abs(w - m) < 0.005) {
      ++hits;
      s0 += x.spins[0];
      s1 += x.spins[1];
      s01 += x.spins[0] * x.spins[1];
    }
  }
  REQUIRE(hits > 500);
  const double cov = s01 / hits - (s0 / hits) * (s1 / hits);
  CHECK(std::abs(cov) < 4.0 / std::sqrt(static_cast<double>(hits)));
}

}  // TEST_SUITE
