// Test-only oracles, independent of the library's implementation paths.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Standard normal cdf via the erf Taylor series
//   erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1)),
// accumulated in long double. Reliable for |x| <= 5, which covers every
// test point; tails are handled by saturation.
inline double phi_series(double x) {
  if (x > 12.0) return 1.0;
  if (x < -12.0) return 0.0;
  const long double z = static_cast<long double>(x) / 1.41421356237309504880L;
  long double term = z;
  long double sum = z;
  for (int n = 1; n < 300; ++n) {
    term *= -z * z / static_cast<long double>(n);
    const long double add = term / static_cast<long double>(2 * n + 1);
    sum += add;
    if (std::abs(static_cast<double>(add)) < 1e-18) break;
  }
  const long double erf = sum * 1.12837916709551257390L; // 2/sqrt(pi)
  return static_cast<double>(0.5L + 0.5L * erf);
}

// Inverse of phi_series by bisection.
inline double phi_inv_bisect(double p) {
  double lo = -12.0, hi = 12.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi_series(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Midpoint-rule quadrature at n points over [a, b].
inline double quadrature(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += f(a + (i + 0.5) * h);
  return acc * h;
}

// Minimum-weight perfect matching by full recursive enumeration of pair
// partitions. Exponential; fine for n <= 12.
inline double brute_force_matching(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<char> used(n, 0);
  std::function<double()> go = [&]() -> double {
    int i = 0;
    while (i < n && used[i]) ++i;
    if (i == n) return 0.0;
    used[i] = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      best = std::min(best, m(i, j) + go());
      used[j] = 0;
    }
    used[i] = 0;
    return best;
  };
  return go();
}

} // namespace oracles
