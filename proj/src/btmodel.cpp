#include "wilks/btmodel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wilks/errors.hpp"

namespace wilks {

namespace {

// Same grouped layout as the beta-model solver: free groups share one value,
// frozen nodes (always including the reference) keep fixed values.
struct Reduction {
  int n = 0;
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of;  // node -> group, -1 when frozen
  std::vector<double> fixed;
  int reference = 0;
  bool shift_reference = false;  // re-pin after each sweep (no other frozen)
};

std::vector<double> assemble(const Reduction& red,
                             const std::vector<double>& u) {
  std::vector<double> beta = red.fixed;
  for (std::size_t gi = 0; gi < red.groups.size(); ++gi) {
    for (int node : red.groups[gi]) beta[node] = u[gi];
  }
  return beta;
}

// c[i] = sum_{j != i} k_ij / (w_i + w_j); the win count expected for item i is
// then w_i * c[i], and the minorization update is w_i <- d_i / c[i].
void comparison_sums(const ComparisonData& data, const std::vector<double>& w,
                     std::vector<double>* c) {
  const int n = data.n;
  c->assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double q =
          static_cast<double>(data.comparisons(i, j)) / (w[i] + w[j]);
      (*c)[i] += q;
      (*c)[j] += q;
    }
  }
}

struct Scores {
  std::vector<double> group_sum;  // sum_{i in g} c[i]
  std::vector<double> residual;
  double residual_inf = 0.0;
  double ref_update = 0.0;  // log d_ref - log c[ref], for the re-pin sweep
};

Scores evaluate(const ComparisonData& data, const Reduction& red,
                const std::vector<double>& u,
                const std::vector<double>& win_sum) {
  const std::vector<double> beta = assemble(red, u);
  std::vector<double> w(red.n);
  for (int i = 0; i < red.n; ++i) w[i] = std::exp(beta[i]);
  std::vector<double> c;
  comparison_sums(data, w, &c);
  Scores sc;
  sc.group_sum.resize(red.groups.size());
  sc.residual.resize(red.groups.size());
  for (std::size_t gi = 0; gi < red.groups.size(); ++gi) {
    double acc = 0.0;
    for (int node : red.groups[gi]) acc += c[node];
    sc.group_sum[gi] = acc;
    sc.residual[gi] = std::exp(u[gi]) * acc - win_sum[gi];
    sc.residual_inf = std::max(sc.residual_inf, std::fabs(sc.residual[gi]));
  }
  if (red.shift_reference) {
    const double d_ref = static_cast<double>(data.out_wins(red.reference));
    sc.ref_update = std::log(d_ref) - std::log(c[red.reference]);
  }
  return sc;
}

Eigen::MatrixXd reduced_info(const ComparisonData& data, const Reduction& red,
                             const std::vector<double>& beta) {
  const int ng = static_cast<int>(red.groups.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(ng, ng);
  for (int a = 0; a < red.n; ++a) {
    for (int b = a + 1; b < red.n; ++b) {
      const int ga = red.group_of[a];
      const int gb = red.group_of[b];
      if (ga == gb) continue;  // same group or both frozen: no contribution
      const double v = static_cast<double>(data.comparisons(a, b)) *
                       sigmoid_deriv(beta[a] - beta[b]);
      if (ga >= 0) {
        j(ga, ga) += v;
        if (gb >= 0) j(ga, gb) -= v;
      }
      if (gb >= 0) {
        j(gb, gb) += v;
        if (ga >= 0) j(gb, ga) -= v;
      }
    }
  }
  return j;
}

constexpr double kDivergenceBound = 30.0;
constexpr int kStallWindow = 50;
constexpr int kMinorizationCap = 100;

struct SolveOutcome {
  std::vector<double> u;
  int iterations = 0;
  double residual_inf = 0.0;
};

SolveOutcome solve_reduced(const ComparisonData& data, const Reduction& red,
                           const std::vector<double>& win_sum,
                           std::vector<double> u, const Tolerance& tol) {
  SolveOutcome out;
  if (red.groups.empty()) {
    out.u = std::move(u);
    return out;
  }
  const int ng = static_cast<int>(red.groups.size());

  auto check_bounds = [&](const std::vector<double>& uu) {
    for (double v : uu) {
      if (!std::isfinite(v) || std::fabs(v) > kDivergenceBound) {
        throw mle_nonexistent(
            "fit diverged; the MLE most likely does not exist");
      }
    }
  };

  check_bounds(u);
  Scores sc = evaluate(data, red, u, win_sum);
  double best = sc.residual_inf;
  int stall = 0;
  int iter = 0;
  bool newton = false;

  while (sc.residual_inf > tol.abs_eps) {
    if (iter >= tol.max_iter) {
      throw mle_nonexistent("iteration limit reached without convergence");
    }
    ++iter;
    if (!newton && (stall >= kStallWindow || iter > kMinorizationCap)) {
      newton = true;
    }

    if (!newton) {
      for (int gi = 0; gi < ng; ++gi) {
        u[gi] = std::log(win_sum[gi]) - std::log(sc.group_sum[gi]);
      }
      if (red.shift_reference) {
        for (int gi = 0; gi < ng; ++gi) u[gi] -= sc.ref_update;
      }
      check_bounds(u);
      sc = evaluate(data, red, u, win_sum);
      if (sc.residual_inf < best) {
        best = sc.residual_inf;
        stall = 0;
      } else {
        ++stall;
      }
      continue;
    }

    const std::vector<double> beta = assemble(red, u);
    Eigen::MatrixXd info = reduced_info(data, red, beta);
    Eigen::VectorXd rhs(ng);
    for (int gi = 0; gi < ng; ++gi) rhs(gi) = -sc.residual[gi];
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
      throw mle_nonexistent("information matrix not positive definite");
    }
    const Eigen::VectorXd delta = llt.solve(rhs);

    double step = 1.0;
    bool improved = false;
    std::vector<double> trial(ng);
    for (int half = 0; half < 40; ++half) {
      for (int gi = 0; gi < ng; ++gi) trial[gi] = u[gi] + step * delta(gi);
      bool in_bounds = true;
      for (double v : trial) {
        if (!std::isfinite(v) || std::fabs(v) > kDivergenceBound) {
          in_bounds = false;
          break;
        }
      }
      if (in_bounds) {
        Scores trial_sc = evaluate(data, red, trial, win_sum);
        if (trial_sc.residual_inf < sc.residual_inf) {
          u = trial;
          sc = std::move(trial_sc);
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) {
      throw mle_nonexistent("Newton step failed to reduce the residual");
    }
  }

  out.u = std::move(u);
  out.iterations = iter;
  out.residual_inf = sc.residual_inf;
  return out;
}

void require_dense(const ComparisonData& data) {
  if (!data.dense()) {
    throw sparse_design(
        "every pair of items needs at least one comparison to fit");
  }
}

int check_reference(const ComparisonData& data, int reference) {
  if (reference < 0 || reference >= data.n) {
    throw invalid_null("reference index outside 1.." + std::to_string(data.n));
  }
  return reference;
}

// Aggregated win totals with boundary detection: a free block that never wins
// (or never loses) a cross-group comparison has no interior maximizer.
std::vector<double> win_totals(const ComparisonData& data,
                               const Reduction& red) {
  std::vector<double> totals(red.groups.size(), 0.0);
  for (std::size_t gi = 0; gi < red.groups.size(); ++gi) {
    const auto& grp = red.groups[gi];
    std::vector<char> in_group(data.n, 0);
    for (int node : grp) in_group[node] = 1;
    std::int64_t d = 0, within = 0, cross = 0;
    for (int node : grp) {
      d += data.out_wins(node);
      for (int j = 0; j < data.n; ++j) {
        if (j == node) continue;
        if (in_group[j]) {
          within += data.wins(node, j);
        } else {
          cross += data.comparisons(node, j);
        }
      }
    }
    const std::int64_t cross_wins = d - within;
    if (cross_wins <= 0 || cross_wins >= cross) {
      throw mle_nonexistent("a free block wins all or none of its comparisons");
    }
    totals[gi] = static_cast<double>(d);
  }
  return totals;
}

BtFitResult finish(const ComparisonData& data, const Reduction& red,
                   const SolveOutcome& out,
                   std::optional<NullHypothesis> restricted_to) {
  BtFitResult r;
  r.beta_hat = ParamVector(assemble(red, out.u), red.reference);
  r.beta_hat.values[red.reference] = 0.0;  // exact by construction
  r.loglik = bt_loglik(data, r.beta_hat);
  r.iterations = out.iterations;
  r.converged = true;
  r.residual_inf = out.residual_inf;
  auto [v_diag, se_free] = bt_fisher_and_se(data, r.beta_hat);
  r.se.assign(data.n, 0.0);
  for (int i = 0, k = 0; i < data.n; ++i) {
    if (i != red.reference) r.se[i] = se_free[k++];
  }
  std::tie(r.b_n, r.c_n) = bt_bn_cn(r.beta_hat);
  r.restricted_to = std::move(restricted_to);
  r.reference = red.reference;
  return r;
}

// Tying a block of items is the same model on the quotient data where the
// block acts as a single super-item, so Ford's existence condition applies to
// the quotient win digraph.
ComparisonData quotient_data(const ComparisonData& data,
                             const std::vector<int>& block) {
  std::vector<int> map(data.n, -1);
  std::vector<char> in_block(data.n, 0);
  for (int node : block) in_block[node] = 1;
  int next = 0;
  const int super = next++;
  for (int i = 0; i < data.n; ++i) {
    map[i] = in_block[i] ? super : next++;
  }
  ComparisonData q = ComparisonData::zeros(next);
  for (int i = 0; i < data.n; ++i) {
    for (int j = 0; j < data.n; ++j) {
      if (i == j || map[i] == map[j]) continue;
      q.wins(map[i], map[j]) += data.wins(i, j);
    }
  }
  return q;
}

}  // namespace

double bt_loglik(const ComparisonData& data, const ParamVector& beta) {
  if (beta.size() != data.n) {
    throw dimension_mismatch("bt_loglik: parameter length != item count");
  }
  double ll = 0.0;
  for (int i = 0; i < data.n; ++i) {
    ll += beta.values[i] * static_cast<double>(data.out_wins(i));
  }
  for (int i = 0; i < data.n; ++i) {
    for (int j = i + 1; j < data.n; ++j) {
      const std::int64_t k = data.comparisons(i, j);
      if (k > 0) {
        ll -= static_cast<double>(k) *
              log_add_exp(beta.values[i], beta.values[j]);
      }
    }
  }
  return ll;
}

std::pair<std::vector<double>, std::vector<double>> bt_fisher_and_se(
    const ComparisonData& data, const ParamVector& beta_hat) {
  if (beta_hat.size() != data.n) {
    throw dimension_mismatch("bt_fisher_and_se: parameter length != item count");
  }
  const int ref = beta_hat.reference.value_or(0);
  std::vector<double> v(data.n, 0.0);
  for (int i = 0; i < data.n; ++i) {
    for (int j = i + 1; j < data.n; ++j) {
      const double vij =
          static_cast<double>(data.comparisons(i, j)) *
          sigmoid_deriv(beta_hat.values[i] - beta_hat.values[j]);
      v[i] += vij;
      v[j] += vij;
    }
  }
  std::vector<double> se;
  se.reserve(data.n - 1);
  for (int i = 0; i < data.n; ++i) {
    if (i != ref) se.push_back(1.0 / std::sqrt(v[i]));
  }
  return {std::move(v), std::move(se)};
}

std::pair<double, double> bt_bn_cn(const ParamVector& beta) {
  const int n = beta.size();
  if (n < 2) throw dimension_mismatch("bt_bn_cn: need n >= 2");
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double x = beta.values[i] - beta.values[j];
      const double t = std::exp(x) + 2.0 + std::exp(-x);
      hi = std::max(hi, t);
      lo = std::min(lo, t);
    }
  }
  return {hi, lo};
}

BtFitResult bt_fit_mle(const ComparisonData& data, const Tolerance& tol,
                       int reference) {
  check_reference(data, reference);
  require_dense(data);
  if (!is_strongly_connected(data)) {
    throw not_strongly_connected(
        "win digraph is not strongly connected; the MLE does not exist");
  }

  Reduction red;
  red.n = data.n;
  red.fixed.assign(data.n, 0.0);
  red.group_of.assign(data.n, -1);
  red.reference = reference;
  red.shift_reference = true;
  for (int i = 0; i < data.n; ++i) {
    if (i == reference) continue;
    red.group_of[i] = static_cast<int>(red.groups.size());
    red.groups.push_back({i});
  }
  std::vector<double> u(red.groups.size(), 0.0);
  const std::vector<double> totals = win_totals(data, red);
  return finish(data, red, solve_reduced(data, red, totals, std::move(u), tol),
                {});
}

BtFitResult bt_fit_restricted(const ComparisonData& data,
                              const NullHypothesis& h0, const Tolerance& tol,
                              int reference) {
  check_reference(data, reference);
  h0.validate(data.n);
  for (int k : h0.indices) {
    if (k == reference) {
      throw invalid_null("null hypothesis may not include the reference item");
    }
  }
  require_dense(data);

  Reduction red;
  red.n = data.n;
  red.fixed.assign(data.n, 0.0);
  red.group_of.assign(data.n, -1);
  red.reference = reference;

  std::vector<char> tested(data.n, 0);
  for (int k : h0.indices) tested[k] = 1;

  std::vector<double> u;
  if (h0.kind == NullHypothesis::Kind::Specified) {
    red.shift_reference = false;
    for (std::size_t t = 0; t < h0.indices.size(); ++t) {
      red.fixed[h0.indices[t]] = h0.values[t];
    }
    for (int i = 0; i < data.n; ++i) {
      if (!tested[i] && i != reference) {
        red.group_of[i] = static_cast<int>(red.groups.size());
        red.groups.push_back({i});
        u.push_back(0.0);
      }
    }
  } else {
    red.shift_reference = true;
    if (!is_strongly_connected(quotient_data(data, h0.indices))) {
      throw not_strongly_connected(
          "quotient win digraph under the tied block is not strongly "
          "connected; the restricted MLE does not exist");
    }
    red.groups.push_back(h0.indices);
    for (int k : h0.indices) red.group_of[k] = 0;
    u.push_back(0.0);
    for (int i = 0; i < data.n; ++i) {
      if (!tested[i] && i != reference) {
        red.group_of[i] = static_cast<int>(red.groups.size());
        red.groups.push_back({i});
        u.push_back(0.0);
      }
    }
  }

  const std::vector<double> totals = win_totals(data, red);
  return finish(data, red, solve_reduced(data, red, totals, std::move(u), tol),
                h0);
}

}  // namespace wilks
