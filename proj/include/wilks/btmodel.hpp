#pragma once

#include <utility>
#include <vector>

#include "wilks/betamodel.hpp"
#include "wilks/graphdata.hpp"
#include "wilks/numerics.hpp"
#include "wilks/types.hpp"

namespace wilks {

// Bradley-Terry fit; the merit of `reference` is pinned to zero exactly.
struct BtFitResult : FitResult {
  int reference = 0;
};

/// Log-likelihood sum_i beta_i d_i - sum_{i<j} k_ij log(e^{beta_i}+e^{beta_j}),
/// where d_i is the total number of wins of item i.
double bt_loglik(const ComparisonData& data, const ParamVector& beta);

/// Fisher information diagonal v_ii = sum_{j != i} k_ij * sigmoid'(beta_i-beta_j)
/// and standard errors sqrt(1 / v_ii) for the non-reference items, in index
/// order.
std::pair<std::vector<double>, std::vector<double>> bt_fisher_and_se(
    const ComparisonData& data, const ParamVector& beta_hat);

/// Max and min over pairs of (1 + e^{beta_i-beta_j})^2 / e^{beta_i-beta_j}.
std::pair<double, double> bt_bn_cn(const ParamVector& beta);

/// Maximum likelihood fit by the minorization (Zermelo) update, re-pinning the
/// reference to zero each sweep. Requires every pair to have at least one
/// comparison and the win digraph to be strongly connected.
BtFitResult bt_fit_mle(const ComparisonData& data, const Tolerance& tol = {},
                       int reference = 0);

/// Restricted fit under a specified or homogeneous null; the null may not
/// include the reference item.
BtFitResult bt_fit_restricted(const ComparisonData& data,
                              const NullHypothesis& h0,
                              const Tolerance& tol = {}, int reference = 0);

}  // namespace wilks
