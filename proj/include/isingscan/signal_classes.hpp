#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "isingscan/model.hpp"

namespace isingscan {

enum class ClassProvenance { explicit_sets, rectangle_grid, disjoint_blocks, greedy_cover };

// A finite family of candidate supports, all of size s. Lattice rectangle
// families keep only their cube anchors and materialize site lists on
// demand; everything else stores explicit site lists.
class ScanClass {
 public:
  static ScanClass from_sets(int n_sites, std::vector<std::vector<int>> sets,
                             ClassProvenance prov = ClassProvenance::explicit_sets);
  static ScanClass from_anchors(int side, int dim, int cube_side,
                                std::vector<std::vector<int>> anchors, ClassProvenance prov);

  int n_sites() const { return n_sites_; }
  int s() const { return s_; }
  std::size_t size() const;
  ClassProvenance provenance() const { return prov_; }

  std::vector<int> candidate(std::size_t k) const;  // sorted site list
  const std::vector<std::vector<int>>& explicit_sets() const { return sets_; }

  bool rectangular() const { return rectangular_; }
  int side() const { return side_; }
  int dim() const { return dim_; }
  int cube_side() const { return cube_side_; }
  // anchor of candidate k, one coordinate per axis
  std::vector<int> anchor(std::size_t k) const;

 private:
  int n_sites_ = 0;
  int s_ = 0;
  ClassProvenance prov_ = ClassProvenance::explicit_sets;
  std::vector<std::vector<int>> sets_;

  bool rectangular_ = false;
  int side_ = 0, dim_ = 0, cube_side_ = 0;
  std::vector<std::vector<int>> axis_anchors_;  // anchors per axis; candidates = product
};

struct RectangleGridParams {
  int n_sites = 0;
  int dim = 1;
  int s = 1;
  double eta = 0.5;  // grid pitch factor; pitch = round(eta * cube_side) >= 1
};

// gamma(S1,S2) = sqrt(2) (1 - |S1 cap S2| / sqrt(|S1||S2|)); sets must be sorted.
double gamma_distance(std::span<const int> s1, std::span<const int> s2);

// Default grid pitch factor min(1/2, 1/sqrt(log(n/s))): vanishing, with
// s^(1/d) eta -> infinity whenever s >> (log n)^d, and |log eta| = o(log(n/s)).
double default_eta(int n_sites, int s);

// Default covering radius 1/sqrt(log n) for mean-field candidate families.
double default_cover_epsilon(int n_sites);

// Greedy farthest-point eps-cover of the class under gamma.
ScanClass greedy_cover(const ScanClass& cls, double eps);

// All axis-aligned cubes of side ceil(s^(1/d)) in the d-dim box of n_sites.
ScanClass build_rectangle_class(int n_sites, int dim, int s);

// Cubes anchored on the eta * s^(1/d) pitch grid.
ScanClass build_scan_grid(const RectangleGridParams& params);

// Center sub-cubes of a disjoint tiling by cubes of side 3 s^(1/d);
// trailing remainders are truncated.
ScanClass build_disjoint_class(int n_sites, int dim, int s);

// `count` consecutive disjoint blocks of size s starting at site 0.
ScanClass make_disjoint_blocks(int n_sites, int s, int count);

SignalSpec apply_signal(std::span<const int> support, double strength, int n_sites);

// One candidate per line, space-separated site indices.
void serialize_class(const ScanClass& cls, std::ostream& out);

}  // namespace isingscan
