#include "isingscan/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace isingscan {

namespace {

void check_cap(const ModelSpec& model, int cap, const char* who) {
  if (model.n_sites() > cap)
    throw std::invalid_argument(std::string(who) + ": n exceeds enumeration cap");
  if (model.n_sites() > 30)
    throw std::invalid_argument(std::string(who) + ": n too large to enumerate");
}

// Gray-code sweep over all 2^n states, calling visit(state_bits, h) for each.
// Bit i set means x_i = +1. The energy is refreshed from scratch every 256
// steps to stop incremental rounding drift.
template <typename Visit>
void enumerate_states(const ModelSpec& model, Visit&& visit) {
  const CouplingGraph& g = model.graph;
  const int n = g.n_sites;
  const std::uint64_t count = 1ULL << n;
  const std::vector<double> mu = model.field.dense();
  const bool complete = g.kind == GraphKind::complete;

  std::vector<std::int8_t> x(n, -1);
  long long total = -n;

  auto local_m = [&](int i) {
    if (complete) return g.scale * (static_cast<double>(total) - x[i]);
    double m = 0.0;
    for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
      const int j = g.neighbors[k];
      m += g.weights[k] * ((j == n) ? 1.0 : static_cast<double>(x[j]));
    }
    return m;
  };
  auto full_h = [&] {
    double fh = 0.0;
    for (int i = 0; i < n; ++i) fh += mu[i] * x[i];
    if (complete) {
      const double s = static_cast<double>(total);
      return 0.5 * model.beta * g.scale * (s * s - n) + fh;
    }
    double coupling = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
        const int j = g.neighbors[k];
        const double term = g.weights[k] * x[i] * ((j == n) ? 1.0 : static_cast<double>(x[j]));
        coupling += (j == n) ? 2.0 * term : term;
      }
    return 0.5 * model.beta * coupling + fh;
  };

  double h = full_h();
  visit(std::uint64_t{0}, h);
  for (std::uint64_t k = 1; k < count; ++k) {
    const int b = std::countr_zero(k);
    h += -2.0 * x[b] * (model.beta * local_m(b) + mu[b]);
    total -= 2 * x[b];
    x[b] = static_cast<std::int8_t>(-x[b]);
    if ((k & 0xffULL) == 0) h = full_h();
    visit(k ^ (k >> 1), h);
  }
}

double log_partition_only(const ModelSpec& model) {
  double hmax = -1e300;
  enumerate_states(model, [&](std::uint64_t, double h) { hmax = std::max(hmax, h); });
  double z = 0.0;
  enumerate_states(model, [&](std::uint64_t, double h) { z += std::exp(h - hmax); });
  return hmax + std::log(z);
}

}  // namespace

ExactSummary exact_summary(const ModelSpec& model, const ExactOptions& opts) {
  check_cap(model, opts.cap, "exact_summary");
  const int n = model.n_sites();
  const std::uint64_t count = 1ULL << n;

  double hmax = -1e300;
  enumerate_states(model, [&](std::uint64_t, double h) { hmax = std::max(hmax, h); });

  ExactSummary out;
  out.means.assign(n, 0.0);
  if (opts.want_cov) out.cov.assign(static_cast<std::size_t>(n) * n, 0.0);
  if (opts.want_pmf) out.pmf.assign(count, 0.0);

  double z = 0.0;
  std::vector<double> second(opts.want_cov ? static_cast<std::size_t>(n) * n : 0, 0.0);
  std::vector<std::int8_t> x(n);
  enumerate_states(model, [&](std::uint64_t bits, double h) {
    const double w = std::exp(h - hmax);
    z += w;
    for (int i = 0; i < n; ++i) x[i] = (bits >> i) & 1 ? +1 : -1;
    for (int i = 0; i < n; ++i) out.means[i] += w * x[i];
    if (opts.want_cov) {
      for (int i = 0; i < n; ++i) {
        const double wxi = w * x[i];
        double* row = second.data() + static_cast<std::size_t>(i) * n;
        for (int j = i; j < n; ++j) row[j] += wxi * x[j];
      }
    }
    if (opts.want_pmf) out.pmf[bits] = w;
  });

  out.log_partition = hmax + std::log(z);
  for (int i = 0; i < n; ++i) out.means[i] /= z;
  if (opts.want_cov) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double c = second[static_cast<std::size_t>(i) * n + j] / z -
                         out.means[i] * out.means[j];
        out.cov[static_cast<std::size_t>(i) * n + j] = c;
        out.cov[static_cast<std::size_t>(j) * n + i] = c;
      }
  }
  if (opts.want_pmf)
    for (auto& p : out.pmf) p /= z;
  return out;
}

double exact_tail(const ModelSpec& model, std::span<const int> support, double t, int cap) {
  check_cap(model, cap, "exact_tail");
  if (support.empty()) throw std::invalid_argument("exact_tail: empty support");
  std::uint64_t mask = 0;
  for (int i : support) {
    if (i < 0 || i >= model.n_sites()) throw std::invalid_argument("exact_tail: bad site");
    mask |= 1ULL << i;
  }
  const double s = static_cast<double>(support.size());
  const double sum_needed = t * std::sqrt(s);

  double hmax = -1e300;
  enumerate_states(model, [&](std::uint64_t, double h) { hmax = std::max(hmax, h); });
  double z = 0.0, hit = 0.0;
  enumerate_states(model, [&](std::uint64_t bits, double h) {
    const double w = std::exp(h - hmax);
    z += w;
    const double block_sum = 2.0 * std::popcount(bits & mask) - s;
    if (block_sum > sum_needed) hit += w;
  });
  return hit / z;
}

double exact_log_ratio(const ModelSpec& model_with_field, const ModelSpec& model_null, int cap) {
  const CouplingGraph& a = model_with_field.graph;
  const CouplingGraph& b = model_null.graph;
  if (a.kind != b.kind || a.n_sites != b.n_sites ||
      model_with_field.beta != model_null.beta || a.edge_count() != b.edge_count())
    throw std::invalid_argument("exact_ratio: models must share graph and beta");
  check_cap(model_with_field, cap, "exact_ratio");
  return log_partition_only(model_with_field) - log_partition_only(model_null);
}

double exact_ratio(const ModelSpec& model_with_field, const ModelSpec& model_null, int cap) {
  return std::exp(exact_log_ratio(model_with_field, model_null, cap));
}

namespace {

// log integral of exp(-n f(w)) dw minus n*f_ref, by windowed composite
// Simpson around every local minimum of f.
class AuxiliaryIntegrator {
 public:
  AuxiliaryIntegrator(int n, double beta, int s, double strength)
      : n_(n), beta_(beta), s_(s), a_(strength) {}

  double f(double w, bool with_field) const {
    const double base = std::log(std::cosh(beta_ * w));
    if (!with_field) return 0.5 * beta_ * w * w - base;
    const double shifted = std::log(std::cosh(beta_ * w + a_));
    return 0.5 * beta_ * w * w - (s_ * shifted + (n_ - s_) * base) / n_;
  }

  // Returns log of integral(exp(-n (f - f_min))) + (-n f_min).
  double log_integral(bool with_field, double rel_tol) const {
    auto g = [&](double w) { return f(w, with_field); };

    // coarse scan for local minima; fixed points satisfy |w| < 1 + A/beta
    const double wmax = 2.0 + a_ / std::max(beta_, 1e-6);
    const int grid = 4001;
    std::vector<double> ws(grid), fs(grid);
    for (int i = 0; i < grid; ++i) {
      ws[i] = -wmax + 2.0 * wmax * i / (grid - 1);
      fs[i] = g(ws[i]);
    }
    std::vector<double> modes;
    for (int i = 1; i + 1 < grid; ++i)
      if (fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1]) {
        double lo = ws[i - 1], hi = ws[i + 1];
        for (int it = 0; it < 200; ++it) {
          const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
          if (g(m1) < g(m2)) hi = m2; else lo = m1;
        }
        modes.push_back(0.5 * (lo + hi));
      }
    if (modes.empty()) throw std::runtime_error("auxiliary_ratio_integral: no mode found");

    double fmin = 1e300;
    for (double m : modes) fmin = std::min(fmin, g(m));

    // windows: expand from each mode until the integrand falls below 1e-18
    // of the peak, then merge overlaps; the step grows geometrically so a
    // nearly flat density (tiny n*beta) still terminates quickly
    std::vector<std::pair<double, double>> windows;
    const double drop = 42.0;  // -log(1e-18) ~ 41.4
    for (double m : modes) {
      const double base_step = 1.0 / std::sqrt(std::max(n_ * beta_, 4.0));
      double step = base_step, lo = m;
      while (n_ * (g(lo) - fmin) < drop) {
        lo -= step;
        step *= 1.05;
      }
      step = base_step;
      double hi = m;
      while (n_ * (g(hi) - fmin) < drop) {
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

    auto simpson = [&](double lo, double hi, int panels) {
      const double h = (hi - lo) / (2 * panels);
      double acc = std::exp(-n_ * (g(lo) - fmin)) + std::exp(-n_ * (g(hi) - fmin));
      for (int k = 1; k < 2 * panels; ++k)
        acc += std::exp(-n_ * (g(lo + k * h) - fmin)) * ((k & 1) ? 4.0 : 2.0);
      return acc * h / 3.0;
    };

    double total = 0.0, total_refined = 0.0;
    for (auto [lo, hi] : merged) {
      total += simpson(lo, hi, 2000);
      total_refined += simpson(lo, hi, 4000);
    }
    if (!(total_refined > 0.0) ||
        std::abs(total_refined - total) > rel_tol * total_refined)
      throw std::runtime_error(
          "auxiliary_ratio_integral: quadrature did not converge (windows=" +
          std::to_string(merged.size()) + ", value=" + std::to_string(total_refined) + ")");
    return std::log(total_refined) - n_ * fmin;
  }

 private:
  int n_;
  double beta_;
  int s_;
  double a_;
};

}  // namespace

double auxiliary_log_ratio_integral(int n, double beta, int s, double strength,
                                    double rel_tol) {
  if (beta < 0.0) throw std::invalid_argument("auxiliary_ratio_integral: beta < 0");
  if (s < 0 || s > n) throw std::invalid_argument("auxiliary_ratio_integral: bad sparsity");
  if (strength < 0.0) throw std::invalid_argument("auxiliary_ratio_integral: negative strength");
  if (s == 0 || strength == 0.0) return 0.0;
  // beta = 0 decouples the sites; the auxiliary density degenerates
  if (beta < 1e-12) return s * std::log(std::cosh(strength));
  AuxiliaryIntegrator integ(n, beta, s, strength);
  return integ.log_integral(true, rel_tol) - integ.log_integral(false, rel_tol);
}

double auxiliary_ratio_integral(int n, double beta, int s, double strength, double rel_tol) {
  return std::exp(auxiliary_log_ratio_integral(n, beta, s, strength, rel_tol));
}

std::vector<double> magnetization_pmf(const ModelSpec& model, int cap) {
  check_cap(model, cap, "magnetization_pmf");
  const int n = model.n_sites();
  double hmax = -1e300;
  enumerate_states(model, [&](std::uint64_t, double h) { hmax = std::max(hmax, h); });
  std::vector<double> pmf(n + 1, 0.0);
  double z = 0.0;
  enumerate_states(model, [&](std::uint64_t bits, double h) {
    const double w = std::exp(h - hmax);
    z += w;
    pmf[std::popcount(bits)] += w;
  });
  for (auto& p : pmf) p /= z;
  return pmf;
}

}  // namespace isingscan
