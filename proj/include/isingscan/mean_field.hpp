#pragma once

#include <cmath>

namespace isingscan {

struct MeanFieldSolution {
  double beta = 0.0;
  double m = 0.0;         // nonnegative root of m = tanh(beta m); 0 for beta <= 1
  double residual = 0.0;  // |m - tanh(beta m)|
};

// Unique nonnegative magnetization root, bisection to residual <= 1e-12.
MeanFieldSolution solve_m(double beta);

// sqrt(2) for beta <= 1, sqrt(2) * cosh(beta m(beta)) above.
double sharp_constant(double beta);

enum class CutoffRegime { high_or_critical, low };

struct CutoffSpec {
  double delta = 0.2;
  double log_class_size = 0.0;
  long s = 0;  // sparsity; used only by the low regime shift
  CutoffRegime regime = CutoffRegime::high_or_critical;
};

// Scan-test cutoff on the Z_max scale. The low regime carries the +-m sqrt(s)
// shift separately from the deviation offset; threshold() is their sum for
// the positive branch.
struct ScanCutoff {
  double shift = 0.0;   // m sqrt(s); zero in the high/critical regime
  double offset = 0.0;  // sqrt(2 (1+delta) (1-m^2) log|class|)
  double threshold() const { return shift + offset; }
};

ScanCutoff scan_cutoff(const CutoffSpec& spec, double beta);

enum class ThresholdFamily { mean_field, lattice };

// Signal strength placing tanh(A) at c times the sharp detection boundary:
// A = artanh(c * K * sqrt(log_class_size / s)) with K = sharp_constant(beta)
// for the mean-field family and K = sqrt(2 chi) for the lattice family.
double signal_strength_for_constant(double c, long s, double log_class_size, double beta,
                                    ThresholdFamily family, double chi = 1.0);

}  // namespace isingscan
