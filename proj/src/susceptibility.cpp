#include "isingscan/susceptibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isingscan/parallel.hpp"

namespace isingscan {

int default_interior_margin(int side) {
  const double l = std::log(static_cast<double>(side));
  return static_cast<int>(std::ceil(l * l));
}

namespace {

std::vector<int> block_sites(const CouplingGraph& g, int s, int margin,
                             const std::vector<int>* anchor_override) {
  int k = 1;
  while (true) {
    long long v = 1;
    for (int ax = 0; ax < g.dim; ++ax) v *= k;
    if (v >= s) break;
    ++k;
  }
  std::vector<int> anchor(g.dim, margin);
  if (anchor_override) anchor = *anchor_override;
  for (int ax = 0; ax < g.dim; ++ax) {
    if (anchor[ax] < margin || anchor[ax] + k > g.side - margin)
      throw std::invalid_argument(
          "estimate_chi: block placement violates the interior margin");
  }
  std::vector<int> sites;
  std::vector<int> offset(g.dim, 0);
  while (true) {
    int idx = 0;
    for (int ax = 0; ax < g.dim; ++ax) idx = idx * g.side + (anchor[ax] + offset[ax]);
    sites.push_back(idx);
    int ax = g.dim - 1;
    while (ax >= 0 && ++offset[ax] == k) offset[ax--] = 0;
    if (ax < 0) break;
  }
  return sites;
}

// jackknife standard error of the (unbiased) sample variance
double jackknife_variance_se(const std::vector<double>& v) {
  const int r = static_cast<int>(v.size());
  if (r < 3) return 0.0;
  double s1 = 0.0, s2 = 0.0;
  for (double x : v) {
    s1 += x;
    s2 += x * x;
  }
  std::vector<double> loo(r);
  double loo_mean = 0.0;
  for (int i = 0; i < r; ++i) {
    const double s1i = s1 - v[i];
    const double s2i = s2 - v[i] * v[i];
    const double m = s1i / (r - 1);
    loo[i] = (s2i - (r - 1) * m * m) / (r - 2);
    loo_mean += loo[i];
  }
  loo_mean /= r;
  double acc = 0.0;
  for (double t : loo) acc += (t - loo_mean) * (t - loo_mean);
  return std::sqrt(acc * (r - 1) / r);
}

}  // namespace

SusceptibilityEstimate estimate_chi(const ModelSpec& model, int s, const ChainConfig& chain,
                                    int replications, std::optional<int> margin_override,
                                    const std::vector<int>* anchor_override, int threads) {
  if (model.graph.kind != GraphKind::lattice)
    throw std::invalid_argument("estimate_chi: lattice models only");
  if (!model.field.is_zero())
    throw std::invalid_argument("estimate_chi: null model required");
  if (replications < 3)
    throw std::invalid_argument("estimate_chi: need at least 3 replications");
  const int margin = margin_override.value_or(default_interior_margin(model.graph.side));
  const std::vector<int> sites = block_sites(model.graph, s, margin, anchor_override);
  const double sqrt_s = std::sqrt(static_cast<double>(sites.size()));

  std::vector<double> z(replications);
  parallel_for(static_cast<std::size_t>(replications), threads, [&](std::size_t r) {
    ChainConfig local = chain;
    local.seed = RngStream::child(chain.seed, r).next_u64();
    const auto draws = swendsen_wang_sample(model, local, 1);
    double acc = 0.0;
    for (int i : sites) acc += draws[0].spins[i];
    z[r] = acc / sqrt_s;
  });

  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= replications;
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= (replications - 1);

  SusceptibilityEstimate est;
  est.beta = model.beta;
  est.bc = model.graph.bc;
  est.chi_hat = var;
  est.std_error = jackknife_variance_se(z);
  est.block_size = static_cast<int>(sites.size());
  est.interior_margin = margin;
  est.replications = replications;
  return est;
}

std::vector<ChiSweepRow> chi_monotonicity_sweep(int side, int dim, Bc bc,
                                                const std::vector<double>& betas, int s,
                                                const ChainConfig& chain, int replications,
                                                std::optional<int> margin_override,
                                                int threads) {
  const CouplingGraph graph = build_lattice(side, dim, bc);
  std::vector<ChiSweepRow> rows;
  rows.reserve(betas.size());
  for (std::size_t k = 0; k < betas.size(); ++k) {
    ChainConfig local = chain;
    local.seed = RngStream::child(chain.seed, 1000003ULL + k).next_u64();
    ModelSpec model(graph, betas[k]);
    ChiSweepRow row;
    row.estimate = estimate_chi(model, s, local, replications, margin_override, nullptr, threads);
    if (k > 0) {
      const auto& prev = rows.back().estimate;
      const double slack = 2.0 * (prev.std_error + row.estimate.std_error);
      row.monotonicity_violation = row.estimate.chi_hat <= prev.chi_hat - slack;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> estimate_null_means(const ModelSpec& model, int draws,
                                        const ChainConfig& chain) {
  if (model.graph.kind != GraphKind::lattice)
    throw std::invalid_argument("estimate_null_means: lattice models only");
  if (!model.field.is_zero())
    throw std::invalid_argument("estimate_null_means: null model required");
  if (draws < 1) throw std::invalid_argument("estimate_null_means: need draws >= 1");
  const int n = model.n_sites();
  std::vector<double> means(n, 0.0);
  const auto samples = swendsen_wang_sample(model, chain, draws);
  for (const auto& x : samples)
    for (int i = 0; i < n; ++i) means[i] += x.spins[i];
  for (auto& m : means) m /= static_cast<double>(draws);
  return means;
}

ChiTable::ChiTable(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  std::sort(knots_.begin(), knots_.end());
  if (knots_.empty()) throw std::invalid_argument("ChiTable: empty");
  for (auto& [b, c] : knots_)
    if (!(c > 0.0)) throw std::invalid_argument("ChiTable: chi values must be positive");
}

double ChiTable::at(double beta) const {
  if (knots_.empty()) throw std::logic_error("ChiTable: empty");
  if (beta <= knots_.front().first) return knots_.front().second;
  if (beta >= knots_.back().first) return knots_.back().second;
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (beta <= knots_[k].first) {
      const auto [b0, c0] = knots_[k - 1];
      const auto [b1, c1] = knots_[k];
      const double t = (beta - b0) / (b1 - b0);
      return c0 + t * (c1 - c0);
    }
  }
  return knots_.back().second;
}

ChiTable build_chi_table(int side, int dim, Bc bc, const std::vector<double>& betas, int s,
                         const ChainConfig& chain, int replications, int threads,
                         std::optional<int> margin_override) {
  const auto rows = chi_monotonicity_sweep(side, dim, bc, betas, s, chain, replications,
                                           margin_override, threads);
  std::vector<std::pair<double, double>> knots;
  knots.reserve(rows.size());
  for (const auto& row : rows)
    knots.emplace_back(row.estimate.beta, row.estimate.chi_hat);
  return ChiTable(std::move(knots));
}

}  // namespace isingscan
