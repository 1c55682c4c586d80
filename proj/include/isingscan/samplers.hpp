#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isingscan/model.hpp"
#include "isingscan/rng.hpp"

namespace isingscan {

enum class InitialState { all_plus, all_minus, uniform_random };
enum class SweepOrder { sequential, random_scan };

struct ChainConfig {
  int burn_in_sweeps = 200;
  int thinning_sweeps = 5;
  InitialState initial_state = InitialState::uniform_random;
  SweepOrder sweep_order = SweepOrder::sequential;
  std::uint64_t seed = 0;

  static ChainConfig glauber_defaults(std::uint64_t seed);
  static ChainConfig swendsen_wang_defaults(std::uint64_t seed);  // burn 50, thin 5
};

// Heat-bath single-site dynamics; one sweep = n site updates (sequential
// order by default). The ghost spin of a plus-bc lattice is never updated.
std::vector<SpinConfiguration> glauber_sample(const ModelSpec& model, const ChainConfig& chain,
                                              int count);

// Auxiliary-variable density for the Curie-Weiss model: W | X ~ N(Xbar,
// 1/(n beta)) and marginally W has density proportional to
// exp(-n f(w)), f_{n,mu}(w) = beta w^2/2 - (1/n) sum_i log cosh(beta w + mu_i).
// Conditionally on W the spins are independent with field beta W + mu_i.
class AuxiliaryDensity {
 public:
  AuxiliaryDensity(int n, double beta, const SignalSpec& field);

  double f(double w) const;       // the exponent rate
  double log_density(double w) const { return -n_ * f(w); }
  const std::vector<double>& modes() const { return modes_; }
  double beta() const { return beta_; }
  int n() const { return n_; }

 private:
  int n_ = 0;
  double beta_ = 0.0;
  std::vector<std::pair<double, long>> field_groups_;  // (value, multiplicity)
  std::vector<double> modes_;
};

// Exact (non-MCMC) Curie-Weiss sampler: draws W by inverse-CDF lookup over a
// tabulated density (1e-10 tail truncation), then n independent spins.
// At beta = 0 the spins are sampled directly (no auxiliary variable).
class CurieWeissExactSampler {
 public:
  CurieWeissExactSampler(int n, double beta, const SignalSpec& field);

  SpinConfiguration draw(RngStream& rng) const;
  double draw_w(RngStream& rng) const;
  const AuxiliaryDensity& density() const { return *density_; }

 private:
  int n_;
  double beta_;
  std::vector<double> mu_;
  std::optional<AuxiliaryDensity> density_;
  std::vector<double> grid_w_, grid_cdf_;
};

SpinConfiguration curie_weiss_exact_sample(int n, double beta, const SignalSpec& field,
                                           RngStream& rng);

// Swendsen-Wang cluster dynamics for lattice models (free or plus bc).
// Bonds open with probability 1 - exp(-2 beta w_e) on satisfied edges;
// component signs are redrawn with weights exp(+-sum of mu over the
// component); the ghost component is pinned to +1 under plus bc.
std::vector<SpinConfiguration> swendsen_wang_sample(const ModelSpec& model,
                                                    const ChainConfig& chain, int count);

// One Edwards-Sokal half step: the bond configuration drawn from spins.
// `open[k]` corresponds to graph.edge_list()[k].
struct BondConfiguration {
  std::vector<std::uint8_t> open;
  std::size_t open_count() const;
};

BondConfiguration fk_ising_bond_sample(const ModelSpec& model, const SpinConfiguration& x,
                                       RngStream& rng);

// Single in-place sweeps, exposed for kernel-level tests and custom chains.
void glauber_sweep(const ModelSpec& model, SpinConfiguration& x, RngStream& rng,
                   SweepOrder order = SweepOrder::sequential);
void swendsen_wang_step(const ModelSpec& model, SpinConfiguration& x, RngStream& rng);

SpinConfiguration initial_configuration(int n, InitialState init, RngStream& rng);

}  // namespace isingscan
