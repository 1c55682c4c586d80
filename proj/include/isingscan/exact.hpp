#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isingscan/model.hpp"

namespace isingscan {

inline constexpr int kExactDefaultCap = 22;

// Brute-force summary of a model with n <= cap sites. Covariances and the
// full pmf are optional because they dominate the cost at larger n.
struct ExactSummary {
  double log_partition = 0.0;
  std::vector<double> means;
  std::vector<double> cov;  // row-major n x n, empty unless requested
  std::vector<double> pmf;  // size 2^n, state bits: bit i set => x_i = +1

  double cov_at(int i, int j) const {
    return cov[static_cast<std::size_t>(i) * means.size() + j];
  }
};

struct ExactOptions {
  bool want_cov = true;
  bool want_pmf = false;
  int cap = kExactDefaultCap;
};

ExactSummary exact_summary(const ModelSpec& model, const ExactOptions& opts = {});

// P(Z_S > t) with Z_S = sum_{i in S} X_i / sqrt(|S|), by enumeration.
double exact_tail(const ModelSpec& model, std::span<const int> support, double t,
                  int cap = kExactDefaultCap);

// Z(model_with_field) / Z(model_null); both models must share graph and beta.
double exact_ratio(const ModelSpec& model_with_field, const ModelSpec& model_null,
                   int cap = kExactDefaultCap);
double exact_log_ratio(const ModelSpec& model_with_field, const ModelSpec& model_null,
                       int cap = kExactDefaultCap);

// Curie-Weiss partition ratio Z(beta,Q,mu_S(A))/Z(beta,Q,0) evaluated as a
// 1-D integral against the auxiliary-variable density prop. to e^{-n f(w)},
// f_{n,mu}(w) = beta w^2/2 - (1/n) sum_i log cosh(beta w + mu_i).
// Works for any n; no enumeration.
double auxiliary_ratio_integral(int n, double beta, int s, double strength,
                                double rel_tol = 1e-8);
double auxiliary_log_ratio_integral(int n, double beta, int s, double strength,
                                    double rel_tol = 1e-8);

// pmf of the total magnetization sum_i X_i; index k holds P(sum = 2k - n).
std::vector<double> magnetization_pmf(const ModelSpec& model, int cap = kExactDefaultCap);

// Randomized small-instance invariant suite: GKS nonnegativity, the GHS
// covariance ordering under coordinate-wise field increase, the
// mean-vs-field lower bound E(X_i) >= (1 - tanh(beta |Q|_inf)) tanh(mu_i),
// the conditional-mean identity E(X_i) = E[tanh(local_field_i)], and the
// ExactSummary structural invariants.
struct OracleCheckReport {
  int instances = 0;
  int failures = 0;
  std::vector<std::string> messages;  // one per failure
  bool ok() const { return failures == 0; }
};

OracleCheckReport run_oracle_invariant_suite(int max_n, int instances, std::uint64_t seed);

}  // namespace isingscan
