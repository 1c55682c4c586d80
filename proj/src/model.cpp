#include "isingscan/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace isingscan {

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::complete: return "complete";
    case GraphKind::erdos_renyi: return "erdos_renyi";
    case GraphKind::random_regular: return "random_regular";
    case GraphKind::lattice: return "lattice";
  }
  return "?";
}

std::string to_string(Bc bc) { return bc == Bc::free ? "free" : "plus"; }

namespace {

// Build symmetric CSR from an undirected edge list over `total` sites.
void fill_csr(CouplingGraph& g, int total, const std::vector<CouplingGraph::Edge>& edges) {
  g.offsets.assign(total + 1, 0);
  for (const auto& e : edges) {
    ++g.offsets[e.i + 1];
    ++g.offsets[e.j + 1];
  }
  for (int i = 0; i < total; ++i) g.offsets[i + 1] += g.offsets[i];
  g.neighbors.assign(g.offsets[total], 0);
  g.weights.assign(g.offsets[total], 0.0);
  std::vector<int> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& e : edges) {
    g.neighbors[cursor[e.i]] = e.j;
    g.weights[cursor[e.i]++] = e.w;
    g.neighbors[cursor[e.j]] = e.i;
    g.weights[cursor[e.j]++] = e.w;
  }
}

}  // namespace

double CouplingGraph::weight_inf_norm() const {
  if (kind == GraphKind::complete) return scale * (n_sites - 1);
  double best = 0.0;
  for (int i = 0; i < n_sites; ++i) {
    double row = 0.0;
    for (int k = offsets[i]; k < offsets[i + 1]; ++k) row += weights[k];
    best = std::max(best, row);
  }
  return best;
}

double CouplingGraph::weight(int i, int j) const {
  if (i == j) return 0.0;
  if (kind == GraphKind::complete)
    return (i < n_sites && j < n_sites) ? scale : 0.0;
  for (int k = offsets[i]; k < offsets[i + 1]; ++k)
    if (neighbors[k] == j) return weights[k];
  return 0.0;
}

std::vector<CouplingGraph::Edge> CouplingGraph::edge_list() const {
  std::vector<Edge> edges;
  if (kind == GraphKind::complete) {
    edges.reserve(static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2);
    for (int i = 0; i < n_sites; ++i)
      for (int j = i + 1; j < n_sites; ++j) edges.push_back({i, j, scale});
    return edges;
  }
  const int total = total_sites();
  for (int i = 0; i < total; ++i)
    for (int k = offsets[i]; k < offsets[i + 1]; ++k)
      if (neighbors[k] > i) edges.push_back({i, neighbors[k], weights[k]});
  return edges;
}

std::size_t CouplingGraph::edge_count() const {
  if (kind == GraphKind::complete)
    return static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2;
  return neighbors.size() / 2;
}

int CouplingGraph::lattice_index(const std::vector<int>& coords) const {
  int idx = 0;
  for (int k = 0; k < dim; ++k) idx = idx * side + coords[k];
  return idx;
}

std::vector<int> CouplingGraph::lattice_coords(int site) const {
  std::vector<int> coords(dim);
  for (int k = dim - 1; k >= 0; --k) {
    coords[k] = site % side;
    site /= side;
  }
  return coords;
}

SignalSpec SignalSpec::zero(int n_sites) {
  SignalSpec s;
  s.n_sites_ = n_sites;
  return s;
}

SignalSpec SignalSpec::uniform(int n_sites, std::vector<int> support, double strength) {
  std::vector<double> values(support.size(), strength);
  return from_values(n_sites, std::move(support), std::move(values));
}

SignalSpec SignalSpec::from_values(int n_sites, std::vector<int> support,
                                   std::vector<double> values) {
  if (support.size() != values.size())
    throw std::invalid_argument("SignalSpec: support/values size mismatch");
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  SignalSpec s;
  s.n_sites_ = n_sites;
  s.support_.reserve(support.size());
  s.values_.reserve(values.size());
  int prev = -1;
  for (std::size_t k : order) {
    const int site = support[k];
    if (site < 0 || site >= n_sites)
      throw std::invalid_argument("SignalSpec: support index out of range");
    if (site == prev) throw std::invalid_argument("SignalSpec: duplicate support index");
    if (values[k] < 0.0) throw std::invalid_argument("SignalSpec: negative field entry");
    s.support_.push_back(site);
    s.values_.push_back(values[k]);
    prev = site;
  }
  return s;
}

double SignalSpec::at(int site) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), site);
  if (it == support_.end() || *it != site) return 0.0;
  return values_[static_cast<std::size_t>(it - support_.begin())];
}

std::vector<double> SignalSpec::dense() const {
  std::vector<double> mu(n_sites_, 0.0);
  for (std::size_t k = 0; k < support_.size(); ++k) mu[support_[k]] = values_[k];
  return mu;
}

double SignalSpec::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

ModelSpec::ModelSpec(CouplingGraph g, double b) : graph(std::move(g)), beta(b) {
  if (beta < 0.0) throw std::invalid_argument("ModelSpec: beta must be nonnegative");
  field = SignalSpec::zero(graph.n_sites);
}

ModelSpec::ModelSpec(CouplingGraph g, double b, SignalSpec f)
    : graph(std::move(g)), beta(b), field(std::move(f)) {
  if (beta < 0.0) throw std::invalid_argument("ModelSpec: beta must be nonnegative");
  if (field.n_sites() != graph.n_sites)
    throw std::invalid_argument("ModelSpec: field dimension mismatch");
}

ModelSpec ModelSpec::with_field(SignalSpec f) const { return ModelSpec(graph, beta, std::move(f)); }

long long SpinConfiguration::total() const {
  long long s = 0;
  for (auto v : spins) s += v;
  return s;
}

SpinConfiguration SpinConfiguration::all_plus(int n) {
  return SpinConfiguration{std::vector<std::int8_t>(n, +1)};
}

SpinConfiguration SpinConfiguration::all_minus(int n) {
  return SpinConfiguration{std::vector<std::int8_t>(n, -1)};
}

CouplingGraph build_complete(int n) {
  if (n < 2) throw std::invalid_argument("build_complete: need n >= 2");
  CouplingGraph g;
  g.kind = GraphKind::complete;
  g.n_sites = n;
  g.scale = 1.0 / n;
  return g;
}

CouplingGraph build_erdos_renyi(int n, double p, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("build_erdos_renyi: need n >= 2");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("build_erdos_renyi: p must lie in (0,1)");
  CouplingGraph g;
  g.kind = GraphKind::erdos_renyi;
  g.n_sites = n;
  g.edge_prob = p;
  g.scale = 1.0 / (n * p);
  std::vector<CouplingGraph::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.push_back({i, j, g.scale});
  fill_csr(g, n, edges);
  return g;
}

CouplingGraph build_random_regular(int n, int degree, RngStream& rng) {
  if (degree < 1 || degree >= n)
    throw std::invalid_argument("build_random_regular: need 1 <= d < n");
  if ((static_cast<long long>(n) * degree) % 2 != 0)
    throw std::invalid_argument("build_random_regular: n*d must be even");

  // Configuration (pairing) model with legal-pair selection: draw stub pairs
  // uniformly, rejecting self-loops and multi-edges pair by pair; restart
  // when the remaining stubs admit no legal pair, budget 10*n restarts.
  // Full-pairing rejection would stall for dense degrees (the acceptance
  // probability decays like exp(-d^2/4)), this variant stays near-uniform
  // and fast for every feasible (n, d).
  const long long budget = 10LL * n;
  const std::size_t stub_count = static_cast<std::size_t>(n) * degree;

  for (long long attempt = 0; attempt < budget; ++attempt) {
    std::vector<int> stubs(stub_count);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < degree; ++k) stubs[static_cast<std::size_t>(i) * degree + k] = i;
    std::vector<std::vector<int>> adj(n);
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(stub_count / 2);
    std::size_t live = stub_count;
    bool stuck = false;
    while (live > 0 && !stuck) {
      const std::size_t tries = 40 + 20 * live;
      bool matched = false;
      for (std::size_t t = 0; t < tries; ++t) {
        const std::size_t ka = rng.uniform_below(live);
        std::size_t kb = rng.uniform_below(live - 1);
        if (kb >= ka) ++kb;
        const int a = stubs[ka], b = stubs[kb];
        if (a == b) continue;
        const auto& row = adj[std::min(a, b)];
        if (std::find(row.begin(), row.end(), std::max(a, b)) != row.end()) continue;
        adj[std::min(a, b)].push_back(std::max(a, b));
        pairs.emplace_back(std::min(a, b), std::max(a, b));
        const std::size_t hi = std::max(ka, kb), lo = std::min(ka, kb);
        std::swap(stubs[hi], stubs[live - 1]);
        std::swap(stubs[lo], stubs[live - 2]);
        live -= 2;
        matched = true;
        break;
      }
      if (!matched) stuck = true;  // dead end; restart the pairing
    }
    if (stuck) continue;

    CouplingGraph g;
    g.kind = GraphKind::random_regular;
    g.n_sites = n;
    g.degree = degree;
    g.scale = 1.0 / degree;
    std::vector<CouplingGraph::Edge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) edges.push_back({a, b, g.scale});
    fill_csr(g, n, edges);
    return g;
  }
  throw std::runtime_error("build_random_regular: pairing retry budget exhausted");
}

CouplingGraph build_lattice(int side, int dim, Bc bc) {
  if (side < 2) throw std::invalid_argument("build_lattice: need side >= 2");
  if (dim < 1) throw std::invalid_argument("build_lattice: need dim >= 1");
  double sites = std::pow(static_cast<double>(side), dim);
  if (sites > 64e6) throw std::invalid_argument("build_lattice: site count overflow");
  int n = 1;
  for (int k = 0; k < dim; ++k) n *= side;

  CouplingGraph g;
  g.kind = GraphKind::lattice;
  g.n_sites = n;
  g.scale = 1.0;
  g.side = side;
  g.dim = dim;
  g.bc = bc;

  std::vector<CouplingGraph::Edge> edges;
  std::vector<int> ghost_mult(bc == Bc::plus ? n : 0, 0);
  std::vector<int> coords(dim, 0);
  for (int site = 0; site < n; ++site) {
    int rem = site;
    for (int k = dim - 1; k >= 0; --k) {
      coords[k] = rem % side;
      rem /= side;
    }
    int stride = 1;
    for (int k = dim - 1; k >= 0; --k) {
      if (coords[k] + 1 < side) edges.push_back({site, site + stride, 1.0});
      if (bc == Bc::plus) {
        if (coords[k] == 0) ++ghost_mult[site];
        if (coords[k] == side - 1) ++ghost_mult[site];
      }
      stride *= side;
    }
  }
  if (bc == Bc::plus) {
    for (int site = 0; site < n; ++site)
      if (ghost_mult[site] > 0)
        edges.push_back({site, n, static_cast<double>(ghost_mult[site])});
  }
  fill_csr(g, g.total_sites(), edges);
  return g;
}

double hamiltonian(const ModelSpec& model, const SpinConfiguration& x) {
  const CouplingGraph& g = model.graph;
  if (x.n_sites() != g.n_sites)
    throw std::invalid_argument("hamiltonian: configuration size mismatch");
  double field_term = 0.0;
  const auto& support = model.field.support();
  const auto& values = model.field.values();
  for (std::size_t k = 0; k < support.size(); ++k)
    field_term += values[k] * x.spins[support[k]];

  if (g.kind == GraphKind::complete) {
    const double s = static_cast<double>(x.total());
    return 0.5 * model.beta * g.scale * (s * s - g.n_sites) + field_term;
  }
  double coupling = 0.0;
  for (int i = 0; i < g.n_sites; ++i) {
    const double xi = x.spins[i];
    for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
      const int j = g.neighbors[k];
      const double xj = (j == g.n_sites) ? 1.0 : static_cast<double>(x.spins[j]);
      coupling += g.weights[k] * xi * xj;
      if (j == g.n_sites) coupling += g.weights[k] * xi * xj;  // ghost row is not iterated
    }
  }
  return 0.5 * model.beta * coupling + field_term;
}

double local_field(const ModelSpec& model, const SpinConfiguration& x, int site) {
  const CouplingGraph& g = model.graph;
  if (site < 0 || site >= g.n_sites)
    throw std::out_of_range("local_field: site index out of range");
  if (x.n_sites() != g.n_sites)
    throw std::invalid_argument("local_field: configuration size mismatch");
  double m = 0.0;
  if (g.kind == GraphKind::complete) {
    m = g.scale * (static_cast<double>(x.total()) - x.spins[site]);
  } else {
    for (int k = g.offsets[site]; k < g.offsets[site + 1]; ++k) {
      const int j = g.neighbors[k];
      m += g.weights[k] * ((j == g.n_sites) ? 1.0 : static_cast<double>(x.spins[j]));
    }
  }
  return model.beta * m + model.field.at(site);
}

void serialize_graph(const CouplingGraph& graph, std::ostream& out) {
  out << "n " << graph.n_sites << "\n";
  out << "kind " << to_string(graph.kind) << "\n";
  if (graph.kind == GraphKind::lattice)
    out << "lattice " << graph.side << " " << graph.dim << " " << to_string(graph.bc) << "\n";
  char buf[64];
  for (const auto& e : graph.edge_list()) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.i, e.j, e.w);
    out << buf;
  }
}

CouplingGraph parse_graph(std::istream& in) {
  std::string line, tag;
  CouplingGraph g;
  int n = -1;
  std::string kind_name;
  std::vector<CouplingGraph::Edge> edges;
  bool has_ghost_edge = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      ls >> tag >> n;
      if (tag != "n" || n < 1) throw std::runtime_error("parse_graph: bad header");
      continue;
    }
    if (kind_name.empty()) {
      ls >> tag >> kind_name;
      if (tag != "kind") throw std::runtime_error("parse_graph: missing kind");
      continue;
    }
    if (line.rfind("lattice", 0) == 0) {
      std::string bc_name;
      ls >> tag >> g.side >> g.dim >> bc_name;
      g.bc = bc_name == "plus" ? Bc::plus : Bc::free;
      continue;
    }
    CouplingGraph::Edge e;
    if (!(ls >> e.i >> e.j >> e.w)) throw std::runtime_error("parse_graph: bad edge line");
    if (e.j == n) has_ghost_edge = true;
    edges.push_back(e);
  }
  g.n_sites = n;
  if (kind_name == "complete") {
    g.kind = GraphKind::complete;
    g.scale = 1.0 / n;
    return g;
  }
  if (kind_name == "erdos_renyi") g.kind = GraphKind::erdos_renyi;
  else if (kind_name == "random_regular") g.kind = GraphKind::random_regular;
  else if (kind_name == "lattice") g.kind = GraphKind::lattice;
  else throw std::runtime_error("parse_graph: unknown kind " + kind_name);
  if (g.kind == GraphKind::lattice && has_ghost_edge && g.bc != Bc::plus)
    throw std::runtime_error("parse_graph: ghost edges require plus bc");
  g.scale = edges.empty() ? 0.0 : edges.front().w;
  if (g.kind == GraphKind::lattice) g.scale = 1.0;
  fill_csr(g, n + (g.kind == GraphKind::lattice && g.bc == Bc::plus ? 1 : 0), edges);
  return g;
}

}  // namespace isingscan
