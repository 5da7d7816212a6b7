#include "oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace oracles {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

long double erf_series(long double z) {
  // Maclaurin series; adequate for |z| < ~3 in long double.
  long double term = z;
  long double sum = z;
  for (int k = 1; k < 400; ++k) {
    term *= -z * z / k;
    const long double add = term / (2 * k + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
  }
  return sum * 2.0L / std::sqrt(kPi);
}

long double erfc_laplace_cf(long double z, int depth) {
  // erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + (2/2)/(z + (3/2)/(z + ...))))
  long double v = z;
  for (int k = depth; k >= 1; --k) {
    v = z + (k * 0.5L) / v;
  }
  return std::exp(-z * z) / std::sqrt(kPi) / v;
}

// Upper-gamma continued fraction evaluated bottom-up at a fixed depth:
// Q(a, x) * Gamma-normalization = pref / (b0 + a1/(b1 + a2/(b2 + ...)))
// with b_k = x + 1 - a + 2k and a_k = -k (k - a).
long double gamma_q_cf_depth(long double a, long double x, int depth) {
  long double f = x + 1.0L - a + 2.0L * depth;
  for (int k = depth; k >= 1; --k) {
    const long double num = -static_cast<long double>(k) * (k - a);
    f = x + 1.0L - a + 2.0L * (k - 1) + num / f;
  }
  const long double pref =
      std::exp(-x + a * std::log(x) - std::lgamma((double)a));
  return pref / f;
}

// Kummer continued fraction for the lower tail:
// P(a, x) = x^a e^{-x} / (Gamma(a) * F) with
// F = a - ax/(a+1 + x/(a+2 - (a+1)x/(a+3 + 2x/(a+4 - ...)))).
long double gamma_p_cf_depth(long double a, long double x, int depth) {
  // partial numerators: odd m = 2t-1 -> -(a+t-1)x, even m = 2t -> t x;
  // partial denominators b_m = a + m.
  long double f = a + depth;
  for (int m = depth; m >= 1; --m) {
    const long double num =
        (m % 2 == 1) ? -(a + (m + 1) / 2 - 1) * x : (m / 2) * x;
    f = a + (m - 1) + num / f;
  }
  const long double pref =
      std::exp(a * std::log(x) - x - std::lgamma((double)a));
  return pref / f;
}

template <typename F>
long double converge_depth(F eval) {
  int depth = 64;
  long double prev = eval(depth);
  for (int round = 0; round < 12; ++round) {
    depth *= 2;
    const long double cur = eval(depth);
    if (std::fabs(cur - prev) <= 1e-19L * (std::fabs(cur) + 1e-300L)) {
      return cur;
    }
    prev = cur;
  }
  return prev;
}

struct Problem {
  int n = 0;
  Eigen::MatrixXd p;
  Eigen::VectorXd frozen;
  // gradient of the log-likelihood and its negative Hessian at beta
  virtual double loglik(const Eigen::VectorXd& beta) const = 0;
  virtual Eigen::VectorXd grad(const Eigen::VectorXd& beta) const = 0;
  virtual Eigen::MatrixXd neg_hess(const Eigen::VectorXd& beta) const = 0;
  virtual ~Problem() = default;
};

BruteFit newton_multistart(const Problem& prob, int starts, unsigned seed) {
  const int m = static_cast<int>(prob.p.cols());
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);

  BruteFit best;
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    if (s > 0) {
      for (int i = 0; i < m; ++i) x(i) = u(rng);
    }
    bool converged = false;
    Eigen::VectorXd beta = prob.p * x + prob.frozen;
    double ll = prob.loglik(beta);
    for (int iter = 0; iter < 300; ++iter) {
      const Eigen::VectorXd g = prob.p.transpose() * prob.grad(beta);
      if (g.lpNorm<Eigen::Infinity>() <= 1e-11) {
        converged = true;
        break;
      }
      const Eigen::MatrixXd h =
          prob.p.transpose() * prob.neg_hess(beta) * prob.p;
      const Eigen::VectorXd delta = h.ldlt().solve(g);
      double step = 1.0;
      bool moved = false;
      for (int half = 0; half < 60; ++half) {
        const Eigen::VectorXd trial = x + step * delta;
        if (trial.lpNorm<Eigen::Infinity>() < 40.0) {
          const Eigen::VectorXd tb = prob.p * trial + prob.frozen;
          const double tll = prob.loglik(tb);
          if (tll > ll || (tll == ll && step < 1.0)) {
            x = trial;
            beta = tb;
            ll = tll;
            moved = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (converged && (!best.ok || ll > best.loglik)) {
      best.ok = true;
      best.beta = beta;
      best.loglik = ll;
    }
  }
  return best;
}

struct BetaProblem : Problem {
  const wilks::UndirectedGraph* g = nullptr;

  double loglik(const Eigen::VectorXd& beta) const override {
    double ll = 0.0;
    for (int i = 0; i < n; ++i) ll += beta(i) * g->degrees[i];
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        ll -= std::log(1.0 + std::exp(beta(i) + beta(j)));
      }
    }
    return ll;
  }
  Eigen::VectorXd grad(const Eigen::VectorXd& beta) const override {
    Eigen::VectorXd gr(n);
    for (int i = 0; i < n; ++i) {
      double e = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) {
          const double ex = std::exp(beta(i) + beta(j));
          e += ex / (1.0 + ex);
        }
      }
      gr(i) = g->degrees[i] - e;
    }
    return gr;
  }
  Eigen::MatrixXd neg_hess(const Eigen::VectorXd& beta) const override {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double ex = std::exp(beta(i) + beta(j));
        const double vij = ex / ((1.0 + ex) * (1.0 + ex));
        v(i, j) = vij;
        v(i, i) += vij;
      }
    }
    return v;
  }
};

struct BtProblem : Problem {
  const wilks::ComparisonData* data = nullptr;

  double loglik(const Eigen::VectorXd& beta) const override {
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      ll += beta(i) * static_cast<double>(data->out_wins(i));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        ll -= static_cast<double>(data->comparisons(i, j)) *
              std::log(std::exp(beta(i)) + std::exp(beta(j)));
      }
    }
    return ll;
  }
  Eigen::VectorXd grad(const Eigen::VectorXd& beta) const override {
    Eigen::VectorXd gr(n);
    for (int i = 0; i < n; ++i) {
      double e = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) {
          const double ex = std::exp(beta(i) - beta(j));
          e += static_cast<double>(data->comparisons(i, j)) * ex / (1.0 + ex);
        }
      }
      gr(i) = static_cast<double>(data->out_wins(i)) - e;
    }
    return gr;
  }
  Eigen::MatrixXd neg_hess(const Eigen::VectorXd& beta) const override {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double ex = std::exp(beta(i) - beta(j));
        const double vij = static_cast<double>(data->comparisons(i, j)) * ex /
                           ((1.0 + ex) * (1.0 + ex));
        v(i, j) = -vij;
        v(i, i) += vij;
      }
    }
    return v;
  }
};

}  // namespace

long double erfc_ref(long double z) {
  if (z < 0.0L) return 2.0L - erfc_ref(-z);
  if (z < 2.0L) return 1.0L - erf_series(z);
  return converge_depth([z](int d) { return erfc_laplace_cf(z, d); });
}

long double chi_square_sf_cf(long double x, int df) {
  const long double a = 0.5L * df;
  const long double t = 0.5L * x;
  if (t <= 0.0L) return 1.0L;
  if (t >= a + 1.0L) {
    return converge_depth([a, t](int d) { return gamma_q_cf_depth(a, t, d); });
  }
  const long double p =
      converge_depth([a, t](int d) { return gamma_p_cf_depth(a, t, d); });
  return 1.0L - p;
}

BruteFit brute_force_beta(const wilks::UndirectedGraph& g,
                          const Eigen::MatrixXd& p,
                          const Eigen::VectorXd& frozen, int starts,
                          unsigned seed) {
  BetaProblem prob;
  prob.n = g.n;
  prob.p = p;
  prob.frozen = frozen;
  prob.g = &g;
  return newton_multistart(prob, starts, seed);
}

BruteFit brute_force_bt(const wilks::ComparisonData& data,
                        const Eigen::MatrixXd& p, const Eigen::VectorXd& frozen,
                        int starts, unsigned seed) {
  BtProblem prob;
  prob.n = data.n;
  prob.p = p;
  prob.frozen = frozen;
  prob.data = &data;
  return newton_multistart(prob, starts, seed);
}

Eigen::MatrixXd full_map(int n) { return Eigen::MatrixXd::Identity(n, n); }

Eigen::MatrixXd pinned_map(int n, int reference) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n - 1);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    if (i != reference) p(i, col++) = 1.0;
  }
  return p;
}

Eigen::MatrixXd tied_map(int n, const std::vector<int>& block,
                         const std::vector<int>& frozen_idx) {
  std::vector<char> in_block(n, 0), frozen(n, 0);
  for (int i : block) in_block[i] = 1;
  for (int i : frozen_idx) frozen[i] = 1;
  int cols = 1;
  for (int i = 0; i < n; ++i) {
    if (!in_block[i] && !frozen[i]) ++cols;
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, cols);
  int col = 1;
  for (int i = 0; i < n; ++i) {
    if (in_block[i]) {
      p(i, 0) = 1.0;
    } else if (!frozen[i]) {
      p(i, col++) = 1.0;
    }
  }
  return p;
}

}  // namespace oracles
