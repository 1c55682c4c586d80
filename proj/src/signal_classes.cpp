#include "isingscan/signal_classes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace isingscan {

namespace {

int integer_root(int n, int dim) {
  // largest r with r^dim <= n, corrected for floating error
  int r = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 1.0 / dim)));
  auto pow_int = [&](int b) {
    long long v = 1;
    for (int k = 0; k < dim; ++k) v *= b;
    return v;
  };
  while (pow_int(r + 1) <= n) ++r;
  while (r > 0 && pow_int(r) > n) --r;
  return r;
}

int cube_side_for(int s, int dim) {
  int k = integer_root(s, dim);
  long long v = 1;
  for (int i = 0; i < dim; ++i) v *= k;
  if (v < s) ++k;  // ceil(s^(1/d))
  return k;
}

}  // namespace

ScanClass ScanClass::from_sets(int n_sites, std::vector<std::vector<int>> sets,
                               ClassProvenance prov) {
  if (sets.empty()) throw std::invalid_argument("ScanClass: empty candidate list");
  ScanClass cls;
  cls.n_sites_ = n_sites;
  cls.prov_ = prov;
  cls.s_ = static_cast<int>(sets.front().size());
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    if (set.empty() || static_cast<int>(set.size()) != cls.s_)
      throw std::invalid_argument("ScanClass: candidates must share a common size");
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
      throw std::invalid_argument("ScanClass: duplicate site in candidate");
    if (set.front() < 0 || set.back() >= n_sites)
      throw std::invalid_argument("ScanClass: site index out of range");
  }
  auto sorted = sets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("ScanClass: duplicate candidates");
  cls.sets_ = std::move(sets);
  return cls;
}

ScanClass ScanClass::from_anchors(int side, int dim, int cube_side,
                                  std::vector<std::vector<int>> anchors,
                                  ClassProvenance prov) {
  ScanClass cls;
  cls.rectangular_ = true;
  cls.side_ = side;
  cls.dim_ = dim;
  cls.cube_side_ = cube_side;
  cls.prov_ = prov;
  long long n = 1, s = 1;
  for (int k = 0; k < dim; ++k) {
    n *= side;
    s *= cube_side;
  }
  cls.n_sites_ = static_cast<int>(n);
  cls.s_ = static_cast<int>(s);
  for (const auto& axis : anchors) {
    if (axis.empty()) throw std::invalid_argument("ScanClass: empty anchor axis");
    for (int a : axis)
      if (a < 0 || a + cube_side > side)
        throw std::invalid_argument("ScanClass: anchor out of range");
  }
  cls.axis_anchors_ = std::move(anchors);
  return cls;
}

std::size_t ScanClass::size() const {
  if (!rectangular_) return sets_.size();
  std::size_t count = 1;
  for (const auto& axis : axis_anchors_) count *= axis.size();
  return count;
}

std::vector<int> ScanClass::anchor(std::size_t k) const {
  if (!rectangular_) throw std::logic_error("ScanClass::anchor: not a rectangle family");
  std::vector<int> a(dim_);
  for (int ax = dim_ - 1; ax >= 0; --ax) {
    const std::size_t len = axis_anchors_[ax].size();
    a[ax] = axis_anchors_[ax][k % len];
    k /= len;
  }
  return a;
}

std::vector<int> ScanClass::candidate(std::size_t k) const {
  if (!rectangular_) return sets_[k];
  const std::vector<int> a = anchor(k);
  std::vector<int> sites;
  sites.reserve(s_);
  std::vector<int> offset(dim_, 0);
  while (true) {
    int idx = 0;
    for (int ax = 0; ax < dim_; ++ax) idx = idx * side_ + (a[ax] + offset[ax]);
    sites.push_back(idx);
    int ax = dim_ - 1;
    while (ax >= 0 && ++offset[ax] == cube_side_) offset[ax--] = 0;
    if (ax < 0) break;
  }
  std::sort(sites.begin(), sites.end());
  return sites;
}

double gamma_distance(std::span<const int> s1, std::span<const int> s2) {
  if (s1.empty() || s2.empty()) throw std::invalid_argument("gamma_distance: empty set");
  std::size_t i = 0, j = 0, common = 0;
  while (i < s1.size() && j < s2.size()) {
    if (s1[i] == s2[j]) ++common, ++i, ++j;
    else if (s1[i] < s2[j]) ++i;
    else ++j;
  }
  const double denom = std::sqrt(static_cast<double>(s1.size()) * s2.size());
  return std::sqrt(2.0) * (1.0 - static_cast<double>(common) / denom);
}

double default_eta(int n_sites, int s) {
  if (s < 1 || n_sites <= s) throw std::invalid_argument("default_eta: need 1 <= s < n");
  const double l = std::log(static_cast<double>(n_sites) / s);
  return l <= 4.0 ? 0.5 : 1.0 / std::sqrt(l);
}

double default_cover_epsilon(int n_sites) {
  if (n_sites < 3) throw std::invalid_argument("default_cover_epsilon: need n >= 3");
  return 1.0 / std::sqrt(std::log(static_cast<double>(n_sites)));
}

ScanClass greedy_cover(const ScanClass& cls, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("greedy_cover: eps must be positive");
  const std::size_t count = cls.size();
  std::vector<std::vector<int>> all(count);
  for (std::size_t k = 0; k < count; ++k) all[k] = cls.candidate(k);

  std::vector<std::vector<int>> cover{all[0]};
  std::vector<double> dist(count);
  for (std::size_t k = 0; k < count; ++k) dist[k] = gamma_distance(all[k], all[0]);
  while (true) {
    std::size_t far = 0;
    for (std::size_t k = 1; k < count; ++k)
      if (dist[k] > dist[far]) far = k;
    if (dist[far] <= eps) break;
    cover.push_back(all[far]);
    for (std::size_t k = 0; k < count; ++k)
      dist[k] = std::min(dist[k], gamma_distance(all[k], all[far]));
  }
  return ScanClass::from_sets(cls.n_sites(), std::move(cover), ClassProvenance::greedy_cover);
}

ScanClass build_rectangle_class(int n_sites, int dim, int s) {
  if (dim < 1) throw std::invalid_argument("build_rectangle_class: dim must be >= 1");
  const int side = integer_root(n_sites, dim);
  long long check = 1;
  for (int k = 0; k < dim; ++k) check *= side;
  if (check != n_sites)
    throw std::invalid_argument("build_rectangle_class: n_sites is not a perfect dim-th power");
  const int k = cube_side_for(s, dim);
  if (k > side) throw std::invalid_argument("build_rectangle_class: cube does not fit the box");
  std::vector<int> axis;
  for (int a = 0; a + k <= side; ++a) axis.push_back(a);
  return ScanClass::from_anchors(side, dim, k, std::vector<std::vector<int>>(dim, axis),
                                 ClassProvenance::rectangle_grid);
}

ScanClass build_scan_grid(const RectangleGridParams& params) {
  if (params.dim < 1 || params.s < 1 || !(params.eta > 0.0) || params.eta > 1.0)
    throw std::invalid_argument("build_scan_grid: bad parameters");
  const int side = integer_root(params.n_sites, params.dim);
  long long check = 1;
  for (int k = 0; k < params.dim; ++k) check *= side;
  if (check != params.n_sites)
    throw std::invalid_argument("build_scan_grid: n_sites is not a perfect dim-th power");
  const int k = cube_side_for(params.s, params.dim);
  if (k > side) throw std::invalid_argument("build_scan_grid: cube does not fit the box");
  const long pitch = std::lround(params.eta * k);
  if (pitch < 1) throw std::invalid_argument("build_scan_grid: pitch rounds to zero");
  std::vector<int> axis;
  for (int a = 0; a + k <= side; a += static_cast<int>(pitch)) axis.push_back(a);
  return ScanClass::from_anchors(side, params.dim, k,
                                 std::vector<std::vector<int>>(params.dim, axis),
                                 ClassProvenance::rectangle_grid);
}

ScanClass build_disjoint_class(int n_sites, int dim, int s) {
  if (dim < 1) throw std::invalid_argument("build_disjoint_class: dim must be >= 1");
  const int side = integer_root(n_sites, dim);
  long long check = 1;
  for (int k = 0; k < dim; ++k) check *= side;
  if (check != n_sites)
    throw std::invalid_argument("build_disjoint_class: n_sites is not a perfect dim-th power");
  const int k = cube_side_for(s, dim);
  const int tile = 3 * k;
  const int tiles_per_axis = side / tile;  // remainder truncated
  if (tiles_per_axis < 1)
    throw std::invalid_argument("build_disjoint_class: box too small for one 3s^(1/d) tile");
  std::vector<int> axis;
  for (int t = 0; t < tiles_per_axis; ++t) axis.push_back(t * tile + k);
  return ScanClass::from_anchors(side, dim, k, std::vector<std::vector<int>>(dim, axis),
                                 ClassProvenance::disjoint_blocks);
}

ScanClass make_disjoint_blocks(int n_sites, int s, int count) {
  if (s < 1 || count < 1) throw std::invalid_argument("make_disjoint_blocks: bad parameters");
  if (static_cast<long long>(s) * count > n_sites)
    throw std::invalid_argument("make_disjoint_blocks: blocks do not fit");
  std::vector<std::vector<int>> sets(count);
  for (int b = 0; b < count; ++b) {
    sets[b].resize(s);
    for (int i = 0; i < s; ++i) sets[b][i] = b * s + i;
  }
  return ScanClass::from_sets(n_sites, std::move(sets), ClassProvenance::disjoint_blocks);
}

SignalSpec apply_signal(std::span<const int> support, double strength, int n_sites) {
  if (strength < 0.0) throw std::invalid_argument("apply_signal: strength must be >= 0");
  if (strength == 0.0) return SignalSpec::zero(n_sites);
  return SignalSpec::uniform(n_sites, std::vector<int>(support.begin(), support.end()),
                             strength);
}

void serialize_class(const ScanClass& cls, std::ostream& out) {
  for (std::size_t k = 0; k < cls.size(); ++k) {
    const auto sites = cls.candidate(k);
    for (std::size_t i = 0; i < sites.size(); ++i)
      out << sites[i] << (i + 1 == sites.size() ? '\n' : ' ');
  }
}

}  // namespace isingscan
