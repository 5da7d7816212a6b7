#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wilks/graphdata.hpp"
#include "wilks/inference.hpp"
#include "wilks/numerics.hpp"
#include "wilks/types.hpp"

namespace wilks {

enum class Schedule { H01, H02, H03, H04, Power };

// One simulation study. Truth schedules, per model:
//   H01   specified null over every parameter, beta_i = (i-1) L_n / (n-1)
//   H02   homogeneous block of the first r (default n/2), first r at 0
//   H03   fixed specified block of the first r (default 5) at given values
//   H04   as H02 with fixed r (default 10)
//   Power homogeneous block of the first r, truth beta_i = (i-1) c / (r-1),
//         remaining parameters 0.2 (i-r) log(n) / n
// L_n = ln_factor * log n. The Bradley-Terry model pins item 1 as the
// reference and drops it from every tested set.
struct SimScenario {
  Model model = Model::Beta;
  Schedule schedule = Schedule::H01;
  int n = 200;
  double ln_factor = 0.0;
  int r = 0;  // 0 -> schedule default
  double c = 0.0;
  int k_common = 1;
  int reps = 1000;
  std::vector<double> alpha_levels = {0.05, 0.10};
  std::uint64_t master_seed = 1;
  std::vector<double> h03_values;  // aligned with the tested set; empty -> 0

  int effective_r() const;
  void validate() const;  // throws invalid_scenario
};

struct SimReport {
  SimScenario scenario;
  std::string regime;  // "chi2" or "normal"
  std::map<double, double> lrt_rejection_rates;
  std::map<double, double> wald_rejection_rates;  // power runs only
  double nonexistence_rate = 0.0;
  int reps_effective = 0;
  std::vector<double> statistics;  // raw 2*(l_full - l_restricted), kept in
                                   // replicate order for quantile export
  double mean_stat = 0.0;          // moments of the calibrated statistic:
  double var_stat = 0.0;           // the normalized z under the normal regime
  double ks_distance_normal = -1.0;  // normal regime only, else -1
};

struct QqRow {
  double empirical;
  double normal_q;
  double chi2_q;
};

struct RunOptions {
  int threads = 0;  // 0 -> WILKS_THREADS environment variable, then hardware
};

/// True parameter vector for a scenario.
ParamVector build_truth(const SimScenario& s);

/// Null hypothesis tested by a scenario (0-based indices).
NullHypothesis null_for(const SimScenario& s);

/// Type-I study: simulate at the truth (which satisfies the null), test each
/// replicate, tally rejections per alpha. Replicates whose MLE does not exist
/// are counted separately and excluded from the rejection denominator.
SimReport run_type1(const SimScenario& s, const RunOptions& opt = {});

/// Power study: likelihood ratio and Wald tests on each replicate.
SimReport run_power(const SimScenario& s, const RunOptions& opt = {});

/// Sorted normalized statistics against normal and chi-square theoretical
/// quantiles.
std::vector<QqRow> qq_export(const SimScenario& s, const RunOptions& opt = {});

/// Quantile table for an arbitrary sample of normalized statistics; r is the
/// tested-set size used for the chi-square column.
std::vector<QqRow> qq_table_from_stats(std::vector<double> normalized, int r);

/// Kolmogorov-Smirnov distance between a sample and the standard normal.
double ks_distance_to_normal(std::vector<double> sample);

/// Quantile of the chi-square distribution by bisection on chi_square_sf.
double chi_square_quantile(double prob, int df);

/// Standard normal quantile by bisection on normal_sf.
double normal_quantile(double prob);

/// Diagnostic sum_{i<r} (d_i - E d_i)^2 / v_ii evaluated at the true
/// parameters (simulation use only).
double quadratic_degree_stat(const UndirectedGraph& g,
                             const ParamVector& beta_true, int r);

}  // namespace wilks
