#include "wilks/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wilks/errors.hpp"

namespace wilks {

namespace {

constexpr int kMaxTerms = 100000;

// Regularized lower incomplete gamma P(a, x) by its power series.
// Reliable for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by the modified Lentz
// continued fraction. Reliable for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < kMaxTerms; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace

double chi_square_sf(double x, int df) {
  if (!(x >= 0.0)) throw std::domain_error("chi_square_sf: x must be >= 0");
  if (df < 1) throw std::domain_error("chi_square_sf: df must be >= 1");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * df;
  const double t = 0.5 * x;
  const double q = (t < a + 1.0) ? 1.0 - gamma_p_series(a, t)
                                 : gamma_q_continued_fraction(a, t);
  return clamp01(q);
}

double normal_sf(double z) {
  return clamp01(0.5 * std::erfc(z / std::sqrt(2.0)));
}

std::vector<double> tridiag_solve(const TridiagonalMatrix& m,
                                  const std::vector<double>& rhs) {
  const int n = m.dim;
  if (n < 1 || static_cast<int>(m.diag.size()) != n ||
      static_cast<int>(m.off.size()) != n - 1 ||
      static_cast<int>(rhs.size()) != n) {
    throw dimension_mismatch("tridiag_solve: inconsistent dimensions");
  }

  // Forward elimination; pivots double as the positive-definiteness check.
  std::vector<double> pivot(n), y(rhs);
  pivot[0] = m.diag[0];
  if (pivot[0] <= 1e-14) throw singular_matrix("tridiag_solve: pivot too small");
  for (int i = 1; i < n; ++i) {
    const double w = m.off[i - 1] / pivot[i - 1];
    y[i] -= w * y[i - 1];
    pivot[i] = m.diag[i] - w * m.off[i - 1];
    if (pivot[i] <= 1e-14) throw singular_matrix("tridiag_solve: pivot too small");
  }

  std::vector<double> x(n);
  x[n - 1] = y[n - 1] / pivot[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    x[i] = (y[i] - m.off[i] * x[i + 1]) / pivot[i];
  }
  return x;
}

}  // namespace wilks
