#include "wilks/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "wilks/errors.hpp"

namespace wilks {

namespace {

int resolve_threads(const RunOptions& opt, int reps) {
  int t = opt.threads;
  if (t <= 0) {
    if (const char* env = std::getenv("WILKS_THREADS")) {
      t = std::atoi(env);
    }
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return std::max(1, std::min(t, reps));
}

// Replicates are independent; results land in index-addressed slots so the
// aggregate never depends on scheduling.
template <typename Fn>
void parallel_replicates(int reps, int threads, Fn&& fn) {
  if (threads <= 1) {
    for (int i = 0; i < reps; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= reps) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Outcome {
  bool exists = false;
  double stat = 0.0;
  double p_lrt = 1.0;
  double p_wald = 1.0;
};

bool is_homogeneous_schedule(Schedule s) {
  return s == Schedule::H02 || s == Schedule::H04 || s == Schedule::Power;
}

std::string regime_name(const SimScenario& s, const NullHypothesis& null) {
  const bool chi2 = has_chi_square_regime(s.model, null) && null.size() <= 30;
  return chi2 ? "chi2" : "normal";
}

void aggregate(const SimScenario& s, const std::vector<Outcome>& outcomes,
               bool with_wald, SimReport* report) {
  int effective = 0;
  for (const Outcome& o : outcomes) {
    if (o.exists) ++effective;
  }
  report->reps_effective = effective;
  report->nonexistence_rate =
      static_cast<double>(s.reps - effective) / s.reps;
  report->statistics.reserve(effective);
  for (const Outcome& o : outcomes) {
    if (o.exists) report->statistics.push_back(o.stat);
  }
  for (double alpha : s.alpha_levels) {
    int rej_lrt = 0, rej_wald = 0;
    for (const Outcome& o : outcomes) {
      if (!o.exists) continue;
      if (o.p_lrt <= alpha) ++rej_lrt;
      if (o.p_wald <= alpha) ++rej_wald;
    }
    const double denom = std::max(1, effective);
    report->lrt_rejection_rates[alpha] = rej_lrt / denom;
    if (with_wald) report->wald_rejection_rates[alpha] = rej_wald / denom;
  }

  // Moments of the calibrated statistic; under the normal regime that is the
  // normalized z, whose limiting law is standard normal.
  std::vector<double> calibrated = report->statistics;
  if (report->regime == "normal") {
    const int r = null_for(s).size();
    for (double& v : calibrated) v = (v - r) / std::sqrt(2.0 * r);
  }
  const int m = static_cast<int>(calibrated.size());
  if (m > 0) {
    const double mean =
        std::accumulate(calibrated.begin(), calibrated.end(), 0.0) / m;
    double ss = 0.0;
    for (double v : calibrated) ss += (v - mean) * (v - mean);
    report->mean_stat = mean;
    report->var_stat = m > 1 ? ss / (m - 1) : 0.0;
    if (report->regime == "normal") {
      report->ks_distance_normal = ks_distance_to_normal(calibrated);
    }
  }
}

}  // namespace

int SimScenario::effective_r() const {
  switch (schedule) {
    case Schedule::H01:
      return n;
    case Schedule::H02:
      return r > 0 ? r : n / 2;
    case Schedule::H03:
      return r > 0 ? r : 5;
    case Schedule::H04:
      return r > 0 ? r : 10;
    case Schedule::Power:
      return r;
  }
  return r;
}

void SimScenario::validate() const {
  if (n < 2) throw invalid_scenario("n must be at least 2");
  if (reps < 1) throw invalid_scenario("reps must be at least 1");
  if (alpha_levels.empty()) throw invalid_scenario("no alpha levels");
  for (double a : alpha_levels) {
    if (!(a > 0.0 && a < 1.0)) {
      throw invalid_scenario("alpha levels must lie in (0, 1)");
    }
  }
  if (model == Model::BT && k_common < 1) {
    throw invalid_scenario("k must be at least 1");
  }
  if (!(ln_factor >= 0.0)) throw invalid_scenario("ln factor must be >= 0");
  const int rr = effective_r();
  if (rr < 1 || rr > n) throw invalid_scenario("tested-set size out of range");
  if (schedule == Schedule::Power) {
    if (!(c >= 0.0)) throw invalid_scenario("power separation c must be >= 0");
    if (rr < 2) throw invalid_scenario("power scenario needs r >= 2");
  }
  if (is_homogeneous_schedule(schedule)) {
    const int block = model == Model::BT ? rr - 1 : rr;
    if (block < 2) {
      throw invalid_scenario("homogeneous block needs at least 2 members");
    }
  }
  if (schedule == Schedule::H03) {
    const int tested = model == Model::BT ? rr - 1 : rr;
    if (tested < 1) throw invalid_scenario("H03 tested set is empty");
    if (!h03_values.empty() &&
        static_cast<int>(h03_values.size()) != tested) {
      throw invalid_scenario("H03 values must match the tested-set size");
    }
  }
}

ParamVector build_truth(const SimScenario& s) {
  s.validate();
  const int n = s.n;
  const double ln = s.ln_factor * std::log(static_cast<double>(n));
  const int rr = s.effective_r();
  std::vector<double> beta(n, 0.0);

  auto tail_schedule = [&](int from) {
    for (int i = from; i < n; ++i) beta[i] = i * ln / (n - 1);
  };

  switch (s.schedule) {
    case Schedule::H01:
      tail_schedule(0);
      break;
    case Schedule::H02:
    case Schedule::H04:
      tail_schedule(rr);  // first rr stay at zero
      break;
    case Schedule::H03: {
      tail_schedule(rr);
      const int first = s.model == Model::BT ? 1 : 0;
      for (int i = first; i < rr; ++i) {
        beta[i] =
            s.h03_values.empty() ? 0.0 : s.h03_values[i - first];
      }
      break;
    }
    case Schedule::Power: {
      for (int i = 0; i < rr; ++i) beta[i] = i * s.c / (rr - 1);
      const double logn = std::log(static_cast<double>(n));
      for (int i = rr; i < n; ++i) beta[i] = 0.2 * (i + 1 - rr) * logn / n;
      break;
    }
  }

  if (s.model == Model::BT) {
    beta[0] = 0.0;
    return ParamVector(std::move(beta), 0);
  }
  return ParamVector(std::move(beta));
}

NullHypothesis null_for(const SimScenario& s) {
  const int rr = s.effective_r();
  const int first = s.model == Model::BT ? 1 : 0;
  const int upto = s.schedule == Schedule::H01 ? s.n : rr;
  std::vector<int> idx;
  for (int i = first; i < upto; ++i) idx.push_back(i);

  if (s.schedule == Schedule::H01 || s.schedule == Schedule::H03) {
    const ParamVector truth = build_truth(s);
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (int i : idx) vals.push_back(truth.values[i]);
    return NullHypothesis::specified(std::move(idx), std::move(vals));
  }
  return NullHypothesis::homogeneous(std::move(idx));
}

SimReport run_type1(const SimScenario& s, const RunOptions& opt) {
  s.validate();
  if (s.schedule == Schedule::Power && s.c != 0.0) {
    throw invalid_scenario("type-I run requires a null scenario (c = 0)");
  }
  const ParamVector truth = build_truth(s);
  const NullHypothesis null = null_for(s);
  null.validate(s.n);
  const Tolerance tol;

  std::vector<Outcome> outcomes(s.reps);
  parallel_replicates(s.reps, resolve_threads(opt, s.reps), [&](int i) {
    const std::uint64_t seed = derive_seed(s.master_seed, i);
    try {
      TestResult res;
      if (s.model == Model::Beta) {
        const UndirectedGraph g = simulate_beta_graph(truth, seed);
        res = run_lrt(g, null, Regime::Auto, tol);
      } else {
        const ComparisonData d = simulate_bt_data(truth, s.k_common, seed);
        res = run_lrt(d, null, Regime::Auto, tol, false, 0);
      }
      outcomes[i] = {true, res.lrt_stat, res.p_value, 1.0};
    } catch (const mle_nonexistent&) {
    } catch (const not_strongly_connected&) {
    }
  });

  SimReport report;
  report.scenario = s;
  report.regime = regime_name(s, null);
  aggregate(s, outcomes, false, &report);
  return report;
}

SimReport run_power(const SimScenario& s, const RunOptions& opt) {
  s.validate();
  if (s.schedule != Schedule::Power) {
    throw invalid_scenario("run_power requires the power schedule");
  }
  const ParamVector truth = build_truth(s);
  const NullHypothesis null = null_for(s);
  null.validate(s.n);
  const Tolerance tol;
  const int df = degrees_of_freedom(s.model, null);

  std::vector<Outcome> outcomes(s.reps);
  parallel_replicates(s.reps, resolve_threads(opt, s.reps), [&](int i) {
    const std::uint64_t seed = derive_seed(s.master_seed, i);
    try {
      double stat = 0.0, p_wald = 1.0;
      if (s.model == Model::Beta) {
        const UndirectedGraph g = simulate_beta_graph(truth, seed);
        const FitResult full = fit_mle(g, tol);
        const FitResult restr = fit_restricted(g, null, tol);
        stat = lrt_statistic(full.loglik, restr.loglik);
        p_wald = wald_from_fit(full.beta_hat.values, fisher_diag(full.beta_hat),
                               null.indices)
                     .second;
      } else {
        const ComparisonData d = simulate_bt_data(truth, s.k_common, seed);
        const BtFitResult full = bt_fit_mle(d, tol, 0);
        const BtFitResult restr = bt_fit_restricted(d, null, tol, 0);
        stat = lrt_statistic(full.loglik, restr.loglik);
        p_wald = wald_from_fit(full.beta_hat.values,
                               bt_fisher_and_se(d, full.beta_hat).first,
                               null.indices)
                     .second;
      }
      outcomes[i] = {true, stat, chi_square_sf(stat, df), p_wald};
    } catch (const mle_nonexistent&) {
    } catch (const not_strongly_connected&) {
    }
  });

  SimReport report;
  report.scenario = s;
  report.regime = "chi2";
  aggregate(s, outcomes, true, &report);
  return report;
}

std::vector<QqRow> qq_export(const SimScenario& s, const RunOptions& opt) {
  const SimReport report = run_type1(s, opt);
  const int r = null_for(s).size();
  std::vector<double> z = report.statistics;
  for (double& v : z) v = (v - r) / std::sqrt(2.0 * r);
  return qq_table_from_stats(std::move(z), r);
}

std::vector<QqRow> qq_table_from_stats(std::vector<double> normalized, int r) {
  std::sort(normalized.begin(), normalized.end());
  const int m = static_cast<int>(normalized.size());
  std::vector<QqRow> rows(m);
  const double scale = std::sqrt(2.0 * r);
  for (int i = 0; i < m; ++i) {
    const double p = (i + 0.5) / m;
    rows[i].empirical = normalized[i];
    rows[i].normal_q = normal_quantile(p);
    rows[i].chi2_q = (chi_square_quantile(p, r) - r) / scale;
  }
  return rows;
}

double ks_distance_to_normal(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const int m = static_cast<int>(sample.size());
  double ks = 0.0;
  for (int i = 0; i < m; ++i) {
    const double cdf = 1.0 - normal_sf(sample[i]);
    ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / m));
    ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / m - cdf));
  }
  return ks;
}

double chi_square_quantile(double prob, int df) {
  if (!(prob >= 0.0 && prob < 1.0)) {
    throw std::domain_error("chi_square_quantile: prob must be in [0, 1)");
  }
  if (prob == 0.0) return 0.0;
  const double tail = 1.0 - prob;
  double hi = df + 10.0 * std::sqrt(2.0 * df) + 20.0;
  while (chi_square_sf(hi, df) > tail) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-12 * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    if (chi_square_sf(mid, df) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("normal_quantile: prob must be in (0, 1)");
  }
  const double tail = 1.0 - prob;
  double lo = -40.0, hi = 40.0;
  while (hi - lo > 1e-13 * (1.0 + std::fabs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (normal_sf(mid) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double quadratic_degree_stat(const UndirectedGraph& g,
                             const ParamVector& beta_true, int r) {
  if (beta_true.size() != g.n) {
    throw dimension_mismatch("quadratic_degree_stat: parameter length != n");
  }
  if (r < 0 || r > g.n) {
    throw dimension_mismatch("quadratic_degree_stat: r out of range");
  }
  double t = 0.0;
  for (int i = 0; i < r; ++i) {
    double expected = 0.0, vii = 0.0;
    for (int j = 0; j < g.n; ++j) {
      if (j == i) continue;
      const double x = beta_true.values[i] + beta_true.values[j];
      expected += sigmoid(x);
      vii += sigmoid_deriv(x);
    }
    const double centered = g.degrees[i] - expected;
    t += centered * centered / vii;
  }
  return t;
}

}  // namespace wilks
