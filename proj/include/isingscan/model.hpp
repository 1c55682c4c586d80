#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isingscan/rng.hpp"

namespace isingscan {

enum class GraphKind { complete, erdos_renyi, random_regular, lattice };

enum class Bc { free, plus };

std::string to_string(GraphKind kind);
std::string to_string(Bc bc);

// Ferromagnetic coupling graph. Sites 0..n_sites-1 are real; a lattice with
// plus boundary condition carries one extra ghost site (index n_sites) whose
// spin is clamped to +1 everywhere. A ghost bond's weight equals the number
// of missing grid neighbours of the boundary site it attaches to.
//
// The complete graph keeps its adjacency implicit (weight 1/n off-diagonal);
// all other kinds store symmetric CSR adjacency over real+ghost sites.
class CouplingGraph {
 public:
  GraphKind kind = GraphKind::complete;
  int n_sites = 0;
  double scale = 0.0;  // uniform per-edge weight for complete/ER/regular, 1 for lattice

  // CSR over total_sites() rows (empty for the complete graph).
  std::vector<int> offsets;
  std::vector<int> neighbors;
  std::vector<double> weights;

  // lattice metadata
  int side = 0;
  int dim = 0;
  Bc bc = Bc::free;

  // ER / regular metadata
  double edge_prob = 0.0;
  int degree = 0;

  bool has_ghost() const { return kind == GraphKind::lattice && bc == Bc::plus; }
  int ghost_site() const { return n_sites; }
  int total_sites() const { return n_sites + (has_ghost() ? 1 : 0); }

  // max_i sum_j |Q_ij| over real sites (ghost column included)
  double weight_inf_norm() const;

  double weight(int i, int j) const;

  // Canonical undirected edge list (i < j, ghost last), deterministic order.
  struct Edge {
    int i, j;
    double w;
  };
  std::vector<Edge> edge_list() const;

  std::size_t edge_count() const;

  // row-major lattice indexing, last axis fastest
  int lattice_index(const std::vector<int>& coords) const;
  std::vector<int> lattice_coords(int site) const;
};

// External field. `support` is sorted and duplicate-free; `values` holds the
// nonnegative field entries on the support, zero elsewhere.
class SignalSpec {
 public:
  SignalSpec() = default;
  static SignalSpec zero(int n_sites);
  static SignalSpec uniform(int n_sites, std::vector<int> support, double strength);
  static SignalSpec from_values(int n_sites, std::vector<int> support,
                                std::vector<double> values);

  int n_sites() const { return n_sites_; }
  int sparsity() const { return static_cast<int>(support_.size()); }
  bool is_zero() const { return support_.empty(); }
  const std::vector<int>& support() const { return support_; }
  const std::vector<double>& values() const { return values_; }
  double at(int site) const;
  std::vector<double> dense() const;
  double sum() const;

 private:
  int n_sites_ = 0;
  std::vector<int> support_;
  std::vector<double> values_;
};

struct ModelSpec {
  CouplingGraph graph;
  double beta = 0.0;
  SignalSpec field;

  ModelSpec() = default;
  ModelSpec(CouplingGraph g, double b);
  ModelSpec(CouplingGraph g, double b, SignalSpec f);

  int n_sites() const { return graph.n_sites; }
  ModelSpec with_field(SignalSpec f) const;
};

// One +-1 assignment per real site (the ghost is implicit).
struct SpinConfiguration {
  std::vector<std::int8_t> spins;

  int n_sites() const { return static_cast<int>(spins.size()); }
  long long total() const;  // sum of spins
  double mean() const { return spins.empty() ? 0.0 : static_cast<double>(total()) / spins.size(); }
  static SpinConfiguration all_plus(int n);
  static SpinConfiguration all_minus(int n);
};

CouplingGraph build_complete(int n);
CouplingGraph build_erdos_renyi(int n, double p, RngStream& rng);
CouplingGraph build_random_regular(int n, int degree, RngStream& rng);
CouplingGraph build_lattice(int side, int dim, Bc bc);

// (beta/2) x^T Q x + mu^T x, ghost clamped to +1 under plus bc.
double hamiltonian(const ModelSpec& model, const SpinConfiguration& x);

// beta * sum_j Q_ij x_j + mu_i; flipping spin i changes the hamiltonian by
// exactly -2 x_i * local_field(i).
double local_field(const ModelSpec& model, const SpinConfiguration& x, int site);

// Line-oriented text format: `n <count>`, `kind <name>`, one `i j weight`
// line per undirected edge (ghost site written as index n). Stable order.
void serialize_graph(const CouplingGraph& graph, std::ostream& out);
CouplingGraph parse_graph(std::istream& in);

}  // namespace isingscan
