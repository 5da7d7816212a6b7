#pragma once

#include <cmath>
#include <vector>

namespace wilks {

// Convergence knobs shared by the iterative solvers.
struct Tolerance {
  double abs_eps = 1e-8;
  double rel_eps = 1e-10;
  int max_iter = 5000;
};

// Symmetric tridiagonal matrix: entry (k, k+1) equals entry (k+1, k).
struct TridiagonalMatrix {
  int dim = 0;
  std::vector<double> diag;  // dim entries
  std::vector<double> off;   // dim-1 entries
};

/// Survival function P(X > x) for X ~ chi-square with df degrees of freedom.
/// Throws std::domain_error on x < 0 or df < 1.
double chi_square_sf(double x, int df);

/// Upper tail 1 - Phi(z) of the standard normal.
double normal_sf(double z);

/// Solves m * x = rhs by the Thomas algorithm. The matrix must be symmetric
/// positive definite; a pivot <= 1e-14 in magnitude raises singular_matrix.
std::vector<double> tridiag_solve(const TridiagonalMatrix& m,
                                  const std::vector<double>& rhs);

// Logistic helpers, stable in both tails.
inline double sigmoid(double x) {
  if (x >= 0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// sigmoid'(x) = e^x / (1 + e^x)^2, an even function of x.
inline double sigmoid_deriv(double x) {
  const double e = std::exp(-std::fabs(x));
  const double d = 1.0 + e;
  return e / (d * d);
}

// log(1 + e^x)
inline double log1p_exp(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// log(e^a + e^b)
inline double log_add_exp(double a, double b) {
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace wilks
