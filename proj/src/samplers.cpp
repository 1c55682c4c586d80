#include "isingscan/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace isingscan {

ChainConfig ChainConfig::glauber_defaults(std::uint64_t seed) {
  ChainConfig c;
  c.burn_in_sweeps = 200;
  c.thinning_sweeps = 5;
  c.seed = seed;
  return c;
}

ChainConfig ChainConfig::swendsen_wang_defaults(std::uint64_t seed) {
  ChainConfig c;
  c.burn_in_sweeps = 50;
  c.thinning_sweeps = 5;
  c.seed = seed;
  return c;
}

SpinConfiguration initial_configuration(int n, InitialState init, RngStream& rng) {
  switch (init) {
    case InitialState::all_plus: return SpinConfiguration::all_plus(n);
    case InitialState::all_minus: return SpinConfiguration::all_minus(n);
    case InitialState::uniform_random: {
      SpinConfiguration x;
      x.spins.resize(n);
      for (int i = 0; i < n; ++i) x.spins[i] = static_cast<std::int8_t>(rng.spin(0.5));
      return x;
    }
  }
  throw std::logic_error("initial_configuration: bad init");
}

namespace {

void validate_chain(const ChainConfig& chain) {
  if (chain.burn_in_sweeps < 0 || chain.thinning_sweeps < 1)
    throw std::invalid_argument("ChainConfig: need burn_in >= 0 and thinning >= 1");
}

struct GlauberKernel {
  const ModelSpec& model;
  const std::vector<double> mu;
  long long total;  // running spin sum, kept for the complete graph

  explicit GlauberKernel(const ModelSpec& m, const SpinConfiguration& x)
      : model(m), mu(m.field.dense()), total(x.total()) {}

  double field_at(const SpinConfiguration& x, int i) const {
    const CouplingGraph& g = model.graph;
    if (g.kind == GraphKind::complete)
      return model.beta * g.scale * (static_cast<double>(total) - x.spins[i]) + mu[i];
    double m = 0.0;
    for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
      const int j = g.neighbors[k];
      m += g.weights[k] * ((j == g.n_sites) ? 1.0 : static_cast<double>(x.spins[j]));
    }
    return model.beta * m + mu[i];
  }

  void update(SpinConfiguration& x, int i, RngStream& rng) {
    const double p_plus = 0.5 * (1.0 + std::tanh(field_at(x, i)));
    const std::int8_t next = static_cast<std::int8_t>(rng.spin(p_plus));
    total += next - x.spins[i];
    x.spins[i] = next;
  }
};

}  // namespace

void glauber_sweep(const ModelSpec& model, SpinConfiguration& x, RngStream& rng,
                   SweepOrder order) {
  GlauberKernel kernel(model, x);
  const int n = model.n_sites();
  if (order == SweepOrder::sequential) {
    for (int i = 0; i < n; ++i) kernel.update(x, i, rng);
  } else {
    for (int t = 0; t < n; ++t)
      kernel.update(x, static_cast<int>(rng.uniform_below(n)), rng);
  }
}

std::vector<SpinConfiguration> glauber_sample(const ModelSpec& model, const ChainConfig& chain,
                                              int count) {
  validate_chain(chain);
  RngStream rng(chain.seed);
  SpinConfiguration x = initial_configuration(model.n_sites(), chain.initial_state, rng);
  GlauberKernel kernel(model, x);
  const int n = model.n_sites();
  auto sweep = [&] {
    if (chain.sweep_order == SweepOrder::sequential) {
      for (int i = 0; i < n; ++i) kernel.update(x, i, rng);
    } else {
      for (int t = 0; t < n; ++t)
        kernel.update(x, static_cast<int>(rng.uniform_below(n)), rng);
    }
  };
  for (int t = 0; t < chain.burn_in_sweeps; ++t) sweep();
  std::vector<SpinConfiguration> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    for (int t = 0; t < chain.thinning_sweeps; ++t) sweep();
    out.push_back(x);
  }
  return out;
}

AuxiliaryDensity::AuxiliaryDensity(int n, double beta, const SignalSpec& field)
    : n_(n), beta_(beta) {
  if (n < 1) throw std::invalid_argument("AuxiliaryDensity: n must be positive");
  if (beta <= 0.0)
    throw std::invalid_argument("AuxiliaryDensity: beta must be positive (beta=0 degenerates)");
  std::map<double, long> groups;
  groups[0.0] = n - field.sparsity();
  for (double v : field.values()) ++groups[v];
  for (auto [value, mult] : groups)
    if (mult > 0) field_groups_.emplace_back(value, mult);

  // locate modes by coarse scan + ternary refinement
  double vmax = 0.0;
  for (auto [value, mult] : field_groups_) vmax = std::max(vmax, value);
  const double wmax = 2.0 + vmax / beta_;
  const int grid = 4001;
  std::vector<double> ws(grid), fs(grid);
  for (int i = 0; i < grid; ++i) {
    ws[i] = -wmax + 2.0 * wmax * i / (grid - 1);
    fs[i] = f(ws[i]);
  }
  for (int i = 1; i + 1 < grid; ++i)
    if (fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1]) {
      double lo = ws[i - 1], hi = ws[i + 1];
      for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (f(m1) < f(m2)) hi = m2; else lo = m1;
      }
      modes_.push_back(0.5 * (lo + hi));
    }
  if (modes_.empty()) throw std::runtime_error("AuxiliaryDensity: no mode found");
}

double AuxiliaryDensity::f(double w) const {
  double acc = 0.0;
  for (auto [value, mult] : field_groups_)
    acc += mult * std::log(std::cosh(beta_ * w + value));
  return 0.5 * beta_ * w * w - acc / n_;
}

CurieWeissExactSampler::CurieWeissExactSampler(int n, double beta, const SignalSpec& field)
    : n_(n), beta_(beta), mu_(field.dense()) {
  if (field.n_sites() != n)
    throw std::invalid_argument("CurieWeissExactSampler: field dimension mismatch");
  if (beta < 0.0) throw std::invalid_argument("CurieWeissExactSampler: beta must be >= 0");
  if (beta < 1e-12) return;  // independent spins; no W table needed
  density_.emplace(n, beta, field);

  double fmin = 1e300;
  for (double m : density_->modes()) fmin = std::min(fmin, density_->f(m));

  auto f = [&](double w) { return density_->f(w); };
  // window each mode until exp(-n (f - fmin)) < 1e-12, then merge; the
  // expansion step grows geometrically so flat densities terminate
  std::vector<std::pair<double, double>> windows;
  for (double m : density_->modes()) {
    const double base_step = 1.0 / std::sqrt(std::max(n * beta, 4.0));
    double step = base_step, lo = m;
    while (n_ * (f(lo) - fmin) < 28.0) {
      lo -= step;
      step *= 1.05;
    }
    step = base_step;
    double hi = m;
    while (n_ * (f(hi) - fmin) < 28.0) {
      hi += step;
      step *= 1.05;
    }
    windows.emplace_back(lo, hi);
  }
  std::sort(windows.begin(), windows.end());
  std::vector<std::pair<double, double>> merged;
  for (auto w : windows) {
    if (!merged.empty() && w.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, w.second);
    else
      merged.push_back(w);
  }

  const int points_per_window = 8192;
  for (auto [lo, hi] : merged) {
    const double h = (hi - lo) / (points_per_window - 1);
    double prev_density = std::exp(-n_ * (f(lo) - fmin));
    double cdf = grid_cdf_.empty() ? 0.0 : grid_cdf_.back();
    grid_w_.push_back(lo);
    grid_cdf_.push_back(cdf);
    for (int i = 1; i < points_per_window; ++i) {
      const double w = lo + i * h;
      const double dens = std::exp(-n_ * (f(w) - fmin));
      cdf += 0.5 * (prev_density + dens) * h;
      grid_w_.push_back(w);
      grid_cdf_.push_back(cdf);
      prev_density = dens;
    }
  }
  const double norm = grid_cdf_.back();
  if (!(norm > 0.0))
    throw std::runtime_error("CurieWeissExactSampler: density tabulation failed");
  for (auto& c : grid_cdf_) c /= norm;
}

double CurieWeissExactSampler::draw_w(RngStream& rng) const {
  if (beta_ < 1e-12)
    throw std::logic_error("CurieWeissExactSampler: no auxiliary variable at beta = 0");
  const double u = rng.uniform();
  auto it = std::upper_bound(grid_cdf_.begin(), grid_cdf_.end(), u);
  std::size_t hi = std::min<std::size_t>(grid_cdf_.size() - 1,
                                         static_cast<std::size_t>(it - grid_cdf_.begin()));
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double span = grid_cdf_[hi] - grid_cdf_[lo];
  const double t = span > 0.0 ? (u - grid_cdf_[lo]) / span : 0.5;
  return grid_w_[lo] + t * (grid_w_[hi] - grid_w_[lo]);
}

SpinConfiguration CurieWeissExactSampler::draw(RngStream& rng) const {
  SpinConfiguration x;
  x.spins.resize(n_);
  if (beta_ < 1e-12) {
    for (int i = 0; i < n_; ++i)
      x.spins[i] = static_cast<std::int8_t>(rng.spin(0.5 * (1.0 + std::tanh(mu_[i]))));
    return x;
  }
  const double w = draw_w(rng);
  for (int i = 0; i < n_; ++i) {
    const double p_plus = 0.5 * (1.0 + std::tanh(beta_ * w + mu_[i]));
    x.spins[i] = static_cast<std::int8_t>(rng.spin(p_plus));
  }
  return x;
}

SpinConfiguration curie_weiss_exact_sample(int n, double beta, const SignalSpec& field,
                                           RngStream& rng) {
  CurieWeissExactSampler sampler(n, beta, field);
  return sampler.draw(rng);
}

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct SwContext {
  std::vector<CouplingGraph::Edge> edges;
  std::vector<double> open_prob;
  std::vector<double> mu;

  SwContext(const ModelSpec& model) {
    if (model.graph.kind != GraphKind::lattice)
      throw std::invalid_argument("swendsen_wang: lattice models only");
    edges = model.graph.edge_list();
    open_prob.resize(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k)
      open_prob[k] = 1.0 - std::exp(-2.0 * model.beta * edges[k].w);
    mu = model.field.dense();
  }
};

void sw_step(const ModelSpec& model, const SwContext& ctx, SpinConfiguration& x,
             RngStream& rng) {
  const CouplingGraph& g = model.graph;
  const int n = g.n_sites;
  const int total = g.total_sites();
  UnionFind uf(total);
  for (std::size_t k = 0; k < ctx.edges.size(); ++k) {
    const auto& e = ctx.edges[k];
    const int si = x.spins[e.i];
    const int sj = (e.j == n) ? 1 : x.spins[e.j];
    if (si == sj && rng.uniform() < ctx.open_prob[k]) uf.unite(e.i, e.j);
  }
  std::vector<double> comp_field(total, 0.0);
  for (int i = 0; i < n; ++i) comp_field[uf.find(i)] += ctx.mu[i];
  const int ghost_root = g.has_ghost() ? uf.find(g.ghost_site()) : -1;
  std::vector<std::int8_t> sign(total, 0);
  if (ghost_root >= 0) sign[ghost_root] = +1;
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (sign[r] == 0) {
      const double p_plus = 0.5 * (1.0 + std::tanh(comp_field[r]));
      sign[r] = static_cast<std::int8_t>(rng.spin(p_plus));
    }
    x.spins[i] = sign[r];
  }
}

}  // namespace

void swendsen_wang_step(const ModelSpec& model, SpinConfiguration& x, RngStream& rng) {
  SwContext ctx(model);
  sw_step(model, ctx, x, rng);
}

std::vector<SpinConfiguration> swendsen_wang_sample(const ModelSpec& model,
                                                    const ChainConfig& chain, int count) {
  validate_chain(chain);
  SwContext ctx(model);
  RngStream rng(chain.seed);
  SpinConfiguration x = initial_configuration(model.n_sites(), chain.initial_state, rng);
  for (int t = 0; t < chain.burn_in_sweeps; ++t) sw_step(model, ctx, x, rng);
  std::vector<SpinConfiguration> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    for (int t = 0; t < chain.thinning_sweeps; ++t) sw_step(model, ctx, x, rng);
    out.push_back(x);
  }
  return out;
}

std::size_t BondConfiguration::open_count() const {
  std::size_t c = 0;
  for (auto v : open) c += v;
  return c;
}

BondConfiguration fk_ising_bond_sample(const ModelSpec& model, const SpinConfiguration& x,
                                       RngStream& rng) {
  if (model.graph.kind != GraphKind::lattice)
    throw std::invalid_argument("fk_ising_bond_sample: lattice models only");
  const auto edges = model.graph.edge_list();
  BondConfiguration bonds;
  bonds.open.assign(edges.size(), 0);
  const int n = model.graph.n_sites;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const int si = x.spins[e.i];
    const int sj = (e.j == n) ? 1 : x.spins[e.j];
    if (si == sj) {
      const double p = 1.0 - std::exp(-2.0 * model.beta * e.w);
      if (rng.uniform() < p) bonds.open[k] = 1;
    }
  }
  return bonds;
}

}  // namespace isingscan
