#include <cmath>
#include <sstream>

#include "isingscan/exact.hpp"
#include "isingscan/rng.hpp"

namespace isingscan {

namespace {

CouplingGraph random_graph(int n, RngStream& rng) {
  switch (rng.uniform_below(4)) {
    case 0: return build_complete(n);
    case 1: return build_erdos_renyi(n, 0.3 + 0.4 * rng.uniform(), rng);
    case 2: {
      int d = 1 + static_cast<int>(rng.uniform_below(std::max(1, n / 2)));
      if ((n * d) % 2 != 0) d = d > 1 ? d - 1 : d + 1;
      if (d >= 1 && d < n && (n * d) % 2 == 0) return build_random_regular(n, d, rng);
      return build_complete(n);
    }
    default: {
      // 1-D chain of length n, or a 2-D square when n is a perfect square
      const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
      if (r * r == n && r >= 2)
        return build_lattice(r, 2, rng.bernoulli(0.5) ? Bc::plus : Bc::free);
      return build_lattice(n, 1, Bc::free);
    }
  }
}

SignalSpec random_field(int n, double max_strength, RngStream& rng) {
  std::vector<int> support;
  std::vector<double> values;
  for (int i = 0; i < n; ++i)
    if (rng.bernoulli(0.4)) {
      support.push_back(i);
      values.push_back(max_strength * rng.uniform());
    }
  return SignalSpec::from_values(n, std::move(support), std::move(values));
}

}  // namespace

OracleCheckReport run_oracle_invariant_suite(int max_n, int instances, std::uint64_t seed) {
  OracleCheckReport report;
  RngStream rng(seed);
  const double tol = 1e-12;

  for (int t = 0; t < instances; ++t) {
    const int n = 2 + static_cast<int>(rng.uniform_below(std::max(1, max_n - 1)));
    const CouplingGraph graph = random_graph(n, rng);
    const double beta = 2.0 * rng.uniform();
    const SignalSpec mu2 = random_field(n, 1.0, rng);

    // mu1 >= mu2 coordinate-wise
    std::vector<int> support(n);
    std::vector<double> bumped(n);
    for (int i = 0; i < n; ++i) {
      support[i] = i;
      bumped[i] = mu2.at(i) + (rng.bernoulli(0.5) ? rng.uniform() : 0.0);
    }
    const SignalSpec mu1 = SignalSpec::from_values(n, support, bumped);

    ++report.instances;
    auto fail = [&](const std::string& what) {
      ++report.failures;
      std::ostringstream msg;
      msg << "instance " << t << " (n=" << n << ", kind=" << to_string(graph.kind)
          << ", beta=" << beta << "): " << what;
      report.messages.push_back(msg.str());
    };

    try {
      ExactOptions opts;
      opts.want_pmf = true;
      const ModelSpec low(graph, beta, mu2);
      const ModelSpec high(graph, beta, mu1);
      const ExactSummary sum2 = exact_summary(low, opts);
      const ExactSummary sum1 = exact_summary(high, opts);

      double pmf_total = 0.0;
      for (double p : sum2.pmf) pmf_total += p;
      if (std::abs(pmf_total - 1.0) > tol) fail("pmf does not sum to 1");

      for (int i = 0; i < n; ++i) {
        if (sum2.means[i] < -tol) fail("GKS mean violated");
        if (std::abs(sum2.cov_at(i, i) - (1.0 - sum2.means[i] * sum2.means[i])) > 1e-10)
          fail("covariance diagonal mismatch");
        for (int j = 0; j < n; ++j) {
          if (sum2.cov_at(i, j) < -tol) fail("GKS covariance violated");
          if (std::abs(sum2.cov_at(i, j) - sum2.cov_at(j, i)) > tol)
            fail("covariance not symmetric");
          if (sum1.cov_at(i, j) > sum2.cov_at(i, j) + tol) fail("GHS ordering violated");
        }
      }

      const double c = 1.0 - std::tanh(beta * graph.weight_inf_norm());
      for (int i = 0; i < n; ++i)
        if (sum2.means[i] < c * std::tanh(mu2.at(i)) - tol)
          fail("mean lower bound violated");

      // E(X_i) = E[tanh(beta sum_j Q_ij X_j + mu_i)] over the exact pmf
      std::vector<double> tanh_mean(n, 0.0);
      SpinConfiguration x;
      x.spins.resize(n);
      for (std::uint64_t bits = 0; bits < sum2.pmf.size(); ++bits) {
        if (sum2.pmf[bits] == 0.0) continue;
        for (int i = 0; i < n; ++i) x.spins[i] = (bits >> i) & 1 ? +1 : -1;
        for (int i = 0; i < n; ++i)
          tanh_mean[i] += sum2.pmf[bits] * std::tanh(local_field(low, x, i));
      }
      for (int i = 0; i < n; ++i)
        if (std::abs(tanh_mean[i] - sum2.means[i]) > 1e-10)
          fail("conditional-mean identity violated");
    } catch (const std::exception& e) {
      fail(std::string("exception: ") + e.what());
    }
  }
  return report;
}

}  // namespace isingscan
