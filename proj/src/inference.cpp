#include "wilks/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wilks/errors.hpp"

namespace wilks {

namespace {

constexpr int kAutoChiSquareLimit = 30;

TestResult build_result(Model model, const NullHypothesis& null, double stat,
                        Regime requested, bool with_wald,
                        const std::vector<double>& fitted,
                        const std::vector<double>& v_diag) {
  TestResult res;
  res.model = model;
  res.null = null;
  res.lrt_stat = stat;

  const bool chi2_ok = has_chi_square_regime(model, null);
  Regime regime = requested;
  if (regime == Regime::Auto) {
    regime = (chi2_ok && null.size() <= kAutoChiSquareLimit) ? Regime::ChiSquare
                                                             : Regime::Normal;
    if (!chi2_ok) {
      res.warnings.push_back(
          "specified nulls in the Bradley-Terry model have no chi-square "
          "limit; using the normal calibration, which is asymptotic in the "
          "tested-set size");
    }
  } else if (regime == Regime::ChiSquare && !chi2_ok) {
    throw no_chi_square_approx(
        "the likelihood ratio statistic for a fixed specified null in the "
        "Bradley-Terry model does not converge to a chi-square distribution");
  }
  res.regime = regime;

  if (regime == Regime::ChiSquare) {
    res.df = degrees_of_freedom(model, null);
    res.p_value = chi_square_sf(stat, res.df);
  } else {
    res.r = null.size();
    res.z = (stat - res.r) / std::sqrt(2.0 * res.r);
    res.p_value = normal_sf(res.z);
    if (res.r < kAutoChiSquareLimit) {
      res.warnings.push_back(
          "normal calibration with a small tested set; the approximation "
          "improves as the tested-set size grows");
    }
  }

  if (with_wald) {
    if (null.kind == NullHypothesis::Kind::Homogeneous) {
      auto [ws, wp] = wald_from_fit(fitted, v_diag, null.indices);
      res.wald_stat = ws;
      res.wald_p = wp;
    } else {
      res.warnings.push_back(
          "Wald test applies to homogeneous blocks only; skipped");
    }
  }
  return res;
}

}  // namespace

double lrt_statistic(double loglik_full, double loglik_restricted) {
  if (!std::isfinite(loglik_full) || !std::isfinite(loglik_restricted)) {
    throw negative_lrt("log-likelihoods must be finite");
  }
  const double diff = loglik_full - loglik_restricted;
  if (diff < -1e-9) {
    throw negative_lrt(
        "restricted log-likelihood exceeds the full log-likelihood; the "
        "restricted fit did not converge to its maximum");
  }
  return std::max(0.0, 2.0 * diff);
}

bool has_chi_square_regime(Model model, const NullHypothesis& null) {
  return !(model == Model::BT && null.kind == NullHypothesis::Kind::Specified);
}

int degrees_of_freedom(Model model, const NullHypothesis& null) {
  if (null.kind == NullHypothesis::Kind::Specified) {
    if (model == Model::BT) {
      throw no_chi_square_approx(
          "no chi-square limit for a fixed specified null in the "
          "Bradley-Terry model");
    }
    if (null.size() < 1) throw invalid_null("empty tested set");
    return null.size();
  }
  const int df = null.size() - 1;
  if (df < 1) {
    throw invalid_null("homogeneous block too small for a chi-square test");
  }
  return df;
}

std::pair<double, double> wald_from_fit(const std::vector<double>& fitted,
                                        const std::vector<double>& v_diag,
                                        const std::vector<int>& block_indices) {
  const int r = static_cast<int>(block_indices.size());
  if (r < 2) throw invalid_null("Wald test needs a block of at least 2");
  std::vector<int> block = block_indices;
  std::sort(block.begin(), block.end());

  std::vector<double> nu(r - 1);
  TridiagonalMatrix omega;
  omega.dim = r - 1;
  omega.diag.resize(r - 1);
  omega.off.resize(r - 2);
  for (int k = 0; k + 1 < r; ++k) {
    const int a = block[k];
    const int b = block[k + 1];
    nu[k] = fitted[a] - fitted[b];
    omega.diag[k] = 1.0 / v_diag[a] + 1.0 / v_diag[b];
    if (k + 2 < r) omega.off[k] = -1.0 / v_diag[b];
  }
  const std::vector<double> x = tridiag_solve(omega, nu);
  double stat = 0.0;
  for (int k = 0; k + 1 < r; ++k) stat += nu[k] * x[k];
  stat = std::max(0.0, stat);
  return {stat, chi_square_sf(stat, r - 1)};
}

TestResult run_lrt(const UndirectedGraph& g, const NullHypothesis& null,
                   Regime regime, const Tolerance& tol, bool with_wald) {
  null.validate(g.n);
  const FitResult full = fit_mle(g, tol);
  const FitResult restricted = fit_restricted(g, null, tol);
  const double stat = lrt_statistic(full.loglik, restricted.loglik);
  return build_result(Model::Beta, null, stat, regime, with_wald,
                      full.beta_hat.values, fisher_diag(full.beta_hat));
}

TestResult run_lrt(const ComparisonData& data, const NullHypothesis& null,
                   Regime regime, const Tolerance& tol, bool with_wald,
                   int reference) {
  null.validate(data.n);
  const BtFitResult full = bt_fit_mle(data, tol, reference);
  const BtFitResult restricted = bt_fit_restricted(data, null, tol, reference);
  const double stat = lrt_statistic(full.loglik, restricted.loglik);
  return build_result(Model::BT, null, stat, regime, with_wald,
                      full.beta_hat.values,
                      bt_fisher_and_se(data, full.beta_hat).first);
}

std::pair<double, double> wald_test(const UndirectedGraph& g,
                                    const std::vector<int>& block_indices,
                                    const Tolerance& tol) {
  const FitResult full = fit_mle(g, tol);
  return wald_from_fit(full.beta_hat.values, fisher_diag(full.beta_hat),
                       block_indices);
}

std::pair<double, double> wald_test(const ComparisonData& data,
                                    const std::vector<int>& block_indices,
                                    const Tolerance& tol, int reference) {
  const BtFitResult full = bt_fit_mle(data, tol, reference);
  return wald_from_fit(full.beta_hat.values,
                       bt_fisher_and_se(data, full.beta_hat).first,
                       block_indices);
}

}  // namespace wilks
