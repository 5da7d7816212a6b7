#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "wilks/graphdata.hpp"
#include "wilks/numerics.hpp"
#include "wilks/types.hpp"

namespace wilks {

struct FitResult {
  ParamVector beta_hat;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual_inf = 0.0;      // sup-norm of the likelihood-equation residuals
  std::vector<double> se;         // diagonal-approximation standard errors
  double b_n = 0.0, c_n = 0.0;    // plug-in values at beta_hat
  std::optional<NullHypothesis> restricted_to;
};

/// Log-likelihood sum_i beta_i d_i - sum_{i<j} log(1 + e^{beta_i + beta_j}).
double beta_loglik(const UndirectedGraph& g, const ParamVector& beta);

/// Fisher information: v_ij = e^{beta_i+beta_j} / (1+e^{beta_i+beta_j})^2 for
/// i != j, v_ii = sum_{j != i} v_ij.
Eigen::MatrixXd fisher_info(const ParamVector& beta);

/// Diagonal of the Fisher information only.
std::vector<double> fisher_diag(const ParamVector& beta);

/// Max and min over pairs i != j of (1 + e^{beta_i+beta_j})^2 / e^{beta_i+beta_j}.
std::pair<double, double> bn_cn(const ParamVector& beta);

/// se_i = sqrt(1 / v_ii), the diagonal approximation to the inverse Fisher
/// information.
std::vector<double> standard_errors(const ParamVector& beta_hat);

/// Maximum likelihood fit by the degree-matching fixed point started at zero,
/// with a damped Newton fallback. Throws mle_nonexistent when a degree sits on
/// the boundary or the iteration diverges.
FitResult fit_mle(const UndirectedGraph& g, const Tolerance& tol = {},
                  const std::optional<std::vector<double>>& init = {});

/// Restricted fit under a specified or homogeneous null.
FitResult fit_restricted(const UndirectedGraph& g, const NullHypothesis& h0,
                         const Tolerance& tol = {});

}  // namespace wilks
