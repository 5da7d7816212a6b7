#include "wilks/betamodel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "wilks/errors.hpp"

namespace wilks {

namespace {

// Free parameters are organized as groups of node indices sharing one value
// (singletons for an ordinary fit, one multi-node group for a homogeneous
// null); the remaining nodes are frozen at fixed values. This covers the
// unrestricted, specified-null, and homogeneous-null fits uniformly.
struct Reduction {
  int n = 0;
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of;   // node -> group, -1 when frozen
  std::vector<double> fixed;   // full length, used for frozen nodes
};

std::vector<double> assemble(const Reduction& red,
                             const std::vector<double>& u) {
  std::vector<double> beta = red.fixed;
  for (std::size_t gi = 0; gi < red.groups.size(); ++gi) {
    for (int node : red.groups[gi]) beta[node] = u[gi];
  }
  return beta;
}

// One pass over pairs: s[i] = sum_{j != i} e^{beta_j} / (1 + e^{beta_i+beta_j}).
// The group score is then w_g * sum_{i in g} s[i] - D_g, and the fixed-point
// update is u_g = log(D_g) - log(sum_{i in g} s[i]).
void pair_sums(const std::vector<double>& beta, std::vector<double>* s) {
  const int n = static_cast<int>(beta.size());
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = std::exp(beta[i]);
  s->assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = 1.0 / (1.0 + w[i] * w[j]);
      (*s)[i] += w[j] * p;
      (*s)[j] += w[i] * p;
    }
  }
}

struct Scores {
  std::vector<double> group_sum;  // sum_{i in g} s[i]
  std::vector<double> residual;   // expected minus observed degree per group
  double residual_inf = 0.0;
};

Scores evaluate(const Reduction& red, const std::vector<double>& u,
                const std::vector<double>& degree_sum) {
  const std::vector<double> beta = assemble(red, u);
  std::vector<double> s;
  pair_sums(beta, &s);
  Scores sc;
  sc.group_sum.resize(red.groups.size());
  sc.residual.resize(red.groups.size());
  for (std::size_t gi = 0; gi < red.groups.size(); ++gi) {
    double acc = 0.0;
    for (int node : red.groups[gi]) acc += s[node];
    sc.group_sum[gi] = acc;
    sc.residual[gi] = std::exp(u[gi]) * acc - degree_sum[gi];
    sc.residual_inf = std::max(sc.residual_inf, std::fabs(sc.residual[gi]));
  }
  return sc;
}

// Reduced Fisher information over the free groups; positive definite whenever
// every v_ij is positive.
Eigen::MatrixXd reduced_info(const Reduction& red,
                             const std::vector<double>& beta) {
  const int ng = static_cast<int>(red.groups.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(ng, ng);
  const int n = red.n;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double v = sigmoid_deriv(beta[a] + beta[b]);
      const int ga = red.group_of[a];
      const int gb = red.group_of[b];
      if (ga >= 0) {
        j(ga, ga) += v;
        if (gb >= 0) j(ga, gb) += v;
      }
      if (gb >= 0) {
        j(gb, gb) += v;
        if (ga >= 0) j(gb, ga) += v;
      }
    }
  }
  return j;
}

constexpr double kDivergenceBound = 30.0;
constexpr int kStallWindow = 50;
constexpr int kFixedPointCap = 100;

// Core solver: degree-matching fixed point, then damped Newton once the fixed
// point stalls or stops making fast progress.
struct SolveOutcome {
  std::vector<double> u;
  int iterations = 0;
  double residual_inf = 0.0;
};

SolveOutcome solve_reduced(const Reduction& red,
                           const std::vector<double>& degree_sum,
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
  Scores sc = evaluate(red, u, degree_sum);
  double best = sc.residual_inf;
  int stall = 0;
  int iter = 0;
  bool newton = false;

  while (sc.residual_inf > tol.abs_eps) {
    if (iter >= tol.max_iter) {
      throw mle_nonexistent("iteration limit reached without convergence");
    }
    ++iter;
    if (!newton && (stall >= kStallWindow || iter > kFixedPointCap)) {
      newton = true;
    }

    if (!newton) {
      for (int gi = 0; gi < ng; ++gi) {
        u[gi] = std::log(degree_sum[gi]) - std::log(sc.group_sum[gi]);
      }
      check_bounds(u);
      sc = evaluate(red, u, degree_sum);
      if (sc.residual_inf < best) {
        best = sc.residual_inf;
        stall = 0;
      } else {
        ++stall;
      }
      continue;
    }

    const std::vector<double> beta = assemble(red, u);
    Eigen::MatrixXd info = reduced_info(red, beta);
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
        Scores trial_sc = evaluate(red, trial, degree_sum);
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

FitResult finish(const UndirectedGraph& g, const Reduction& red,
                 const SolveOutcome& out,
                 std::optional<NullHypothesis> restricted_to) {
  FitResult r;
  r.beta_hat = ParamVector(assemble(red, out.u));
  r.loglik = beta_loglik(g, r.beta_hat);
  r.iterations = out.iterations;
  r.converged = true;
  r.residual_inf = out.residual_inf;
  r.se = standard_errors(r.beta_hat);
  std::tie(r.b_n, r.c_n) = bn_cn(r.beta_hat);
  r.restricted_to = std::move(restricted_to);
  return r;
}

// Aggregated degree totals with boundary detection: a free block whose total
// degree is 0 or maximal pins its value at -inf/+inf, so no MLE exists.
std::vector<double> degree_totals(const UndirectedGraph& g,
                                  const Reduction& red) {
  std::vector<double> totals(red.groups.size(), 0.0);
  for (std::size_t gi = 0; gi < red.groups.size(); ++gi) {
    long long d = 0;
    for (int node : red.groups[gi]) d += g.degrees[node];
    const long long size = static_cast<long long>(red.groups[gi].size());
    if (d == 0 || d == size * (g.n - 1)) {
      throw mle_nonexistent("degree total on the boundary for a free block");
    }
    totals[gi] = static_cast<double>(d);
  }
  return totals;
}

}  // namespace

double beta_loglik(const UndirectedGraph& g, const ParamVector& beta) {
  if (beta.size() != g.n) {
    throw dimension_mismatch("beta_loglik: parameter length != node count");
  }
  double ll = 0.0;
  for (int i = 0; i < g.n; ++i) ll += beta.values[i] * g.degrees[i];
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      ll -= log1p_exp(beta.values[i] + beta.values[j]);
    }
  }
  return ll;
}

Eigen::MatrixXd fisher_info(const ParamVector& beta) {
  const int n = beta.size();
  if (n < 2) throw dimension_mismatch("fisher_info: need n >= 2");
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double vij = sigmoid_deriv(beta.values[i] + beta.values[j]);
      v(i, j) = vij;
      row += vij;
    }
    v(i, i) = row;
  }
  return v;
}

std::vector<double> fisher_diag(const ParamVector& beta) {
  const int n = beta.size();
  if (n < 2) throw dimension_mismatch("fisher_diag: need n >= 2");
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = sigmoid_deriv(beta.values[i] + beta.values[j]);
      d[i] += v;
      d[j] += v;
    }
  }
  return d;
}

std::pair<double, double> bn_cn(const ParamVector& beta) {
  const int n = beta.size();
  if (n < 2) throw dimension_mismatch("bn_cn: need n >= 2");
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double x = beta.values[i] + beta.values[j];
      const double t = std::exp(x) + 2.0 + std::exp(-x);
      hi = std::max(hi, t);
      lo = std::min(lo, t);
    }
  }
  return {hi, lo};
}

std::vector<double> standard_errors(const ParamVector& beta_hat) {
  std::vector<double> se = fisher_diag(beta_hat);
  for (double& v : se) v = 1.0 / std::sqrt(v);
  return se;
}

FitResult fit_mle(const UndirectedGraph& g, const Tolerance& tol,
                  const std::optional<std::vector<double>>& init) {
  for (int i = 0; i < g.n; ++i) {
    if (g.degrees[i] == 0 || g.degrees[i] == g.n - 1) {
      throw mle_nonexistent("degree of node " + std::to_string(i + 1) +
                            " is on the boundary");
    }
  }
  Reduction red;
  red.n = g.n;
  red.fixed.assign(g.n, 0.0);
  red.group_of.resize(g.n);
  red.groups.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    red.groups[i] = {i};
    red.group_of[i] = i;
  }
  std::vector<double> u(g.n, 0.0);
  if (init) {
    if (static_cast<int>(init->size()) != g.n) {
      throw dimension_mismatch("fit_mle: init length != node count");
    }
    u = *init;
  }
  const std::vector<double> totals = degree_totals(g, red);
  return finish(g, red, solve_reduced(red, totals, std::move(u), tol), {});
}

FitResult fit_restricted(const UndirectedGraph& g, const NullHypothesis& h0,
                         const Tolerance& tol) {
  h0.validate(g.n);
  Reduction red;
  red.n = g.n;
  red.fixed.assign(g.n, 0.0);
  red.group_of.assign(g.n, -1);

  std::vector<char> tested(g.n, 0);
  for (int k : h0.indices) tested[k] = 1;

  std::vector<double> u;
  if (h0.kind == NullHypothesis::Kind::Specified) {
    for (std::size_t t = 0; t < h0.indices.size(); ++t) {
      red.fixed[h0.indices[t]] = h0.values[t];
    }
    for (int i = 0; i < g.n; ++i) {
      if (!tested[i]) {
        red.group_of[i] = static_cast<int>(red.groups.size());
        red.groups.push_back({i});
        u.push_back(0.0);
      }
    }
  } else {
    red.groups.push_back(h0.indices);
    for (int k : h0.indices) red.group_of[k] = 0;
    u.push_back(0.0);
    for (int i = 0; i < g.n; ++i) {
      if (!tested[i]) {
        red.group_of[i] = static_cast<int>(red.groups.size());
        red.groups.push_back({i});
        u.push_back(0.0);
      }
    }
  }

  const std::vector<double> totals = degree_totals(g, red);
  return finish(g, red, solve_reduced(red, totals, std::move(u), tol), h0);
}

}  // namespace wilks
