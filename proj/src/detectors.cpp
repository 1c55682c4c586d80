#include "isingscan/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isingscan {

namespace {

// d-dimensional summed-area table over the box values; query gives the sum
// over the cube [a, a+k) by inclusion-exclusion on the 2^d corners.
class SummedAreaTable {
 public:
  SummedAreaTable(std::span<const double> values, int side, int dim)
      : side_(side), dim_(dim), table_(values.begin(), values.end()) {
    strides_.resize(dim_);
    int s = 1;
    for (int ax = dim_ - 1; ax >= 0; --ax) {
      strides_[ax] = s;
      s *= side_;
    }
    // prefix-sum along each axis in turn
    for (int ax = 0; ax < dim_; ++ax) {
      const int stride = strides_[ax];
      for (std::size_t i = 0; i < table_.size(); ++i) {
        const int coord = static_cast<int>(i / stride) % side_;
        if (coord > 0) table_[i] += table_[i - stride];
      }
    }
  }

  double cube_sum(std::span<const int> anchor, int k) const {
    double acc = 0.0;
    const int corners = 1 << dim_;
    for (int mask = 0; mask < corners; ++mask) {
      long idx = 0;
      bool skip = false;
      int sign = 1;
      for (int ax = 0; ax < dim_; ++ax) {
        int c = anchor[ax] + k - 1;  // high corner on this axis
        if (mask & (1 << ax)) {
          c = anchor[ax] - 1;  // low corner (exclusive)
          sign = -sign;
          if (c < 0) {
            skip = true;
            break;
          }
        }
        idx += static_cast<long>(c) * strides_[ax];
      }
      if (!skip) acc += sign * table_[idx];
    }
    return acc;
  }

 private:
  int side_, dim_;
  std::vector<int> strides_;
  std::vector<double> table_;
};

}  // namespace

ScanStatistics scan_statistics(const SpinConfiguration& x, const ScanClass& cls,
                               std::span<const double> centering) {
  if (x.n_sites() != cls.n_sites())
    throw std::invalid_argument("scan_statistics: configuration/class size mismatch");
  if (!centering.empty() && static_cast<int>(centering.size()) != x.n_sites())
    throw std::invalid_argument("scan_statistics: centering size mismatch");

  const std::size_t count = cls.size();
  const double inv_sqrt_s = 1.0 / std::sqrt(static_cast<double>(cls.s()));
  ScanStatistics out;
  out.per_candidate.resize(count);

  if (cls.rectangular()) {
    std::vector<double> values(x.n_sites());
    for (int i = 0; i < x.n_sites(); ++i)
      values[i] = static_cast<double>(x.spins[i]) - (centering.empty() ? 0.0 : centering[i]);
    SummedAreaTable table(values, cls.side(), cls.dim());
    for (std::size_t k = 0; k < count; ++k) {
      const auto a = cls.anchor(k);
      out.per_candidate[k] = table.cube_sum(a, cls.cube_side()) * inv_sqrt_s;
    }
  } else {
    const auto& sets = cls.explicit_sets();
    for (std::size_t k = 0; k < count; ++k) {
      double acc = 0.0;
      for (int i : sets[k])
        acc += static_cast<double>(x.spins[i]) - (centering.empty() ? 0.0 : centering[i]);
      out.per_candidate[k] = acc * inv_sqrt_s;
    }
  }

  out.argmax = 0;
  out.z_max = out.per_candidate[0];
  for (std::size_t k = 1; k < count; ++k)
    if (out.per_candidate[k] > out.z_max) {
      out.z_max = out.per_candidate[k];
      out.argmax = k;
    }
  return out;
}

TestDecision high_temp_scan_test(const ScanStatistics& stats, std::size_t class_size,
                                 double delta) {
  CutoffSpec spec;
  spec.delta = delta;
  spec.log_class_size = std::log(static_cast<double>(class_size));
  if (class_size < 2)
    throw std::invalid_argument("high_temp_scan_test: class must have at least 2 candidates");
  const double threshold = scan_cutoff(spec, 0.0).threshold();
  TestDecision d;
  d.test_name = "high_temp_scan";
  d.statistic = stats.z_max;
  d.threshold = threshold;
  d.reject = stats.z_max > threshold;
  return d;
}

TestDecision high_temp_scan_test(const SpinConfiguration& x, const ScanClass& cls,
                                 double delta) {
  return high_temp_scan_test(scan_statistics(x, cls), cls.size(), delta);
}

TestDecision low_temp_randomized_scan_test(const SpinConfiguration& x, const ScanClass& cls,
                                           double beta, double delta, RngStream& rng) {
  if (beta <= 1.0)
    throw std::invalid_argument("low_temp_randomized_scan_test: requires beta > 1");
  const ScanStatistics stats = scan_statistics(x, cls);
  const int n = x.n_sites();
  const double w = rng.normal(x.mean(), std::sqrt(1.0 / (n * beta)));

  CutoffSpec spec;
  spec.delta = delta;
  spec.log_class_size = std::log(static_cast<double>(cls.size()));
  spec.s = cls.s();
  spec.regime = CutoffRegime::low;
  const ScanCutoff cut = scan_cutoff(spec, beta);

  TestDecision d;
  d.test_name = "low_temp_randomized_scan";
  d.statistic = stats.z_max;
  d.w = w;
  d.branch = w > 0.0 ? Branch::positive : Branch::negative;
  d.threshold = (w > 0.0 ? cut.shift : -cut.shift) + cut.offset;
  d.reject = stats.z_max > d.threshold;
  return d;
}

TestDecision lattice_scan_test(const SpinConfiguration& x, const ScanClass& cls, double chi,
                               double delta, std::span<const double> centering) {
  if (!(chi > 0.0)) throw std::invalid_argument("lattice_scan_test: chi must be positive");
  const ScanStatistics stats = scan_statistics(x, cls, centering);
  TestDecision d;
  d.test_name = "lattice_scan";
  d.statistic = stats.z_max;
  d.threshold =
      std::sqrt(2.0 * (1.0 + delta) * chi * std::log(static_cast<double>(cls.size())));
  d.reject = stats.z_max > d.threshold;
  return d;
}

TestDecision centered_sum_test(const SpinConfiguration& x, double beta,
                               double threshold_multiplier) {
  const int n = x.n_sites();
  const double m = solve_m(beta).m;
  const double sign = x.total() >= 0 ? 1.0 : -1.0;
  TestDecision d;
  d.test_name = "centered_sum";
  d.statistic = static_cast<double>(x.total()) - n * m * sign;
  d.threshold = threshold_multiplier * std::sqrt(n * (1.0 - m * m));
  d.branch = sign > 0 ? Branch::positive : Branch::negative;
  d.reject = d.statistic > d.threshold;
  return d;
}

TestDecision bonferroni_combine(const TestDecision& d1, const TestDecision& d2) {
  TestDecision d = d1.reject || !d2.reject ? d1 : d2;
  d.test_name = "bonferroni(" + d1.test_name + "," + d2.test_name + ")";
  d.reject = d1.reject || d2.reject;
  return d;
}

}  // namespace isingscan
