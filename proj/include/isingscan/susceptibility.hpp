#pragma once

#include <optional>
#include <vector>

#include "isingscan/model.hpp"
#include "isingscan/samplers.hpp"

namespace isingscan {

struct SusceptibilityEstimate {
  double beta = 0.0;
  Bc bc = Bc::free;
  double chi_hat = 0.0;
  double std_error = 0.0;  // jackknife over replications
  int block_size = 0;
  int interior_margin = 0;
  int replications = 0;
};

// Default interior margin ceil(log^2(side)), the desk-scale proxy for the
// "far from the boundary" requirement.
int default_interior_margin(int side);

// chi_hat = sample variance of Z_S over independent Swendsen-Wang chains,
// block = interior cube of volume s anchored `margin` sites from the
// boundary (or at `anchor_override`). The null lattice model only.
SusceptibilityEstimate estimate_chi(const ModelSpec& model, int s, const ChainConfig& chain,
                                    int replications,
                                    std::optional<int> margin_override = std::nullopt,
                                    const std::vector<int>* anchor_override = nullptr,
                                    int threads = 0);

struct ChiSweepRow {
  SusceptibilityEstimate estimate;
  bool monotonicity_violation = false;  // vs the previous grid point
};

// Per-beta estimates on a fixed geometry; flags adjacent pairs with
// chi(b_{k+1}) <= chi(b_k) - 2 (se_k + se_{k+1}).
std::vector<ChiSweepRow> chi_monotonicity_sweep(int side, int dim, Bc bc,
                                                const std::vector<double>& betas, int s,
                                                const ChainConfig& chain, int replications,
                                                std::optional<int> margin_override = std::nullopt,
                                                int threads = 0);

// Per-site null means from a dedicated Swendsen-Wang run; the centering
// input of the plus-bc lattice scan test. Callers cache the result per
// (model, chain) pair.
std::vector<double> estimate_null_means(const ModelSpec& model, int draws,
                                        const ChainConfig& chain);

// Piecewise-linear chi(beta) lookup used by the unknown-beta lattice test.
class ChiTable {
 public:
  ChiTable() = default;
  explicit ChiTable(std::vector<std::pair<double, double>> knots);

  double at(double beta) const;  // linear interpolation, clamped at the ends
  bool empty() const { return knots_.empty(); }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

ChiTable build_chi_table(int side, int dim, Bc bc, const std::vector<double>& betas, int s,
                         const ChainConfig& chain, int replications, int threads = 0,
                         std::optional<int> margin_override = std::nullopt);

// Onsager's closed form for the square lattice.
inline constexpr double kBetaC2 = 0.44068679350977147;  // log(1 + sqrt(2)) / 2

}  // namespace isingscan
