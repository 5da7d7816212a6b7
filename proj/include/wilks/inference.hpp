#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wilks/betamodel.hpp"
#include "wilks/btmodel.hpp"
#include "wilks/graphdata.hpp"
#include "wilks/numerics.hpp"
#include "wilks/types.hpp"

namespace wilks {

enum class Regime { ChiSquare, Normal, Auto };

struct TestResult {
  Model model = Model::Beta;
  NullHypothesis null;
  double lrt_stat = 0.0;
  Regime regime = Regime::ChiSquare;  // never Auto in a result
  int df = 0;                         // chi-square regime
  int r = 0;                          // tested-set size (normal regime)
  double z = 0.0;                     // normalized statistic (normal regime)
  double p_value = 1.0;
  std::optional<double> wald_stat;
  std::optional<double> wald_p;
  std::vector<std::string> warnings;
};

/// max(0, 2 * (full - restricted)); throws negative_lrt when the restricted
/// log-likelihood exceeds the full one beyond rounding (full < restricted - 1e-9).
double lrt_statistic(double loglik_full, double loglik_restricted);

/// Chi-square degrees of freedom for the fixed-dimension calibration:
/// beta/specified -> tested-set size, homogeneous -> block size - 1 (either
/// model). Throws no_chi_square_approx for a Bradley-Terry specified null,
/// which has no chi-square limit, and invalid_null when df would be < 1.
int degrees_of_freedom(Model model, const NullHypothesis& null);

/// True when a chi-square calibration exists for this model/null combination.
bool has_chi_square_regime(Model model, const NullHypothesis& null);

/// Full + restricted fits and the likelihood ratio test. Auto picks
/// chi-square when it applies and the tested set has at most 30 indices,
/// otherwise the normalized-normal calibration z = (stat - r) / sqrt(2r).
TestResult run_lrt(const UndirectedGraph& g, const NullHypothesis& null,
                   Regime regime = Regime::Auto, const Tolerance& tol = {},
                   bool with_wald = false);
TestResult run_lrt(const ComparisonData& data, const NullHypothesis& null,
                   Regime regime = Regime::Auto, const Tolerance& tol = {},
                   bool with_wald = false, int reference = 0);

/// Wald test of equality across a block: consecutive differences of the
/// fitted values against their tridiagonal plug-in covariance, chi-square
/// with block size - 1 degrees of freedom.
std::pair<double, double> wald_test(const UndirectedGraph& g,
                                    const std::vector<int>& block_indices,
                                    const Tolerance& tol = {});
std::pair<double, double> wald_test(const ComparisonData& data,
                                    const std::vector<int>& block_indices,
                                    const Tolerance& tol = {},
                                    int reference = 0);

/// Wald statistic from an already-fitted model: values and Fisher diagonal.
std::pair<double, double> wald_from_fit(const std::vector<double>& fitted,
                                        const std::vector<double>& v_diag,
                                        const std::vector<int>& block_indices);

}  // namespace wilks
