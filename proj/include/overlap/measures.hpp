#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "overlap/density.hpp"

namespace overlap {

enum class Measure { OM, OVL, OB, OC };
enum class Method { closed_form, quadrature, monte_carlo, matching };

/// Raised when a computed value leaves [0,1] by more than round-off.
class numerical_integrity_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OverlapEstimate {
  Measure measure;
  Method method;
  double value = 0.0;
  double std_error = 0.0;        // 0 unless monte_carlo
  std::int64_t n_points = 0;     // grid points per axis, or draws
  std::optional<std::uint64_t> seed;
  bool degenerate_support = false;
  std::int64_t skipped_points = 0; // zero-denominator lattice points
};

inline const char* to_string(Measure m) {
  switch (m) {
    case Measure::OM: return "om";
    case Measure::OVL: return "ovl";
    case Measure::OB: return "ob";
    case Measure::OC: return "oc";
  }
  return "?";
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
    case Method::matching: return "matching";
  }
  return "?";
}

namespace detail {

// Clamp excursions below 1e-12 into [0,1]; anything larger is a logic or
// quadrature failure and must surface.
inline double clamp_unit(double v, const char* what) {
  if (v < 0.0) {
    if (v < -1e-12)
      throw numerical_integrity_error(std::string(what) + ": value " + std::to_string(v) + " below 0");
    return 0.0;
  }
  if (v > 1.0) {
    if (v > 1.0 + 1e-12)
      throw numerical_integrity_error(std::string(what) + ": value " + std::to_string(v) + " above 1");
    return 1.0;
  }
  return v;
}

struct Grid {
  Eigen::ArrayXd x;  // nodes
  Eigen::ArrayXd w;  // trapezoid weights
};

inline Grid union_grid(const DensityModel& p0, const DensityModel& p1, Eigen::Index n) {
  if (n < 101 || n % 2 == 0)
    throw std::invalid_argument("quadrature: n_grid must be odd and >= 101");
  const double lo = std::min(p0.support_lo(), p1.support_lo());
  const double hi = std::max(p0.support_hi(), p1.support_hi());
  Grid g;
  g.x = Eigen::ArrayXd::LinSpaced(n, lo, hi);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  g.w = Eigen::ArrayXd::Constant(n, h);
  g.w[0] *= 0.5;
  g.w[n - 1] *= 0.5;
  return g;
}

inline Eigen::ArrayXd eval_pdf(const DensityModel& p, const Eigen::ArrayXd& x) {
  Eigen::ArrayXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = p.pdf(x[i]);
  return out;
}

inline bool supports_disjoint(const DensityModel& p0, const DensityModel& p1) {
  return p0.support_hi() < p1.support_lo() || p1.support_hi() < p0.support_lo();
}

} // namespace detail

/// Closed-form O_M for equal-variance normals: 2(1 - Phi(|theta| / (sigma sqrt(2)))).
inline OverlapEstimate q_normal_closed_form(double theta, double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("q_normal_closed_form: sigma must be positive");
  OverlapEstimate e;
  e.measure = Measure::OM;
  e.method = Method::closed_form;
  e.value = 2.0 * (1.0 - norm_cdf(std::abs(theta) / (sigma * M_SQRT2)));
  return e;
}

/// Metropolis-Hastings acceptance min{1, p0(y)p1(x) / (p1(y)p0(x))}.
inline double mh_acceptance(double x, double y, const DensityModel& p0, const DensityModel& p1) {
  const double den = p1.pdf(y) * p0.pdf(x);
  if (!(den > 0.0))
    throw std::domain_error("mh_acceptance: p1(y)*p0(x) must be positive");
  return std::min(1.0, p0.pdf(y) * p1.pdf(x) / den);
}

/// Barker acceptance p0(y)p1(x) / (p0(y)p1(x) + p0(x)p1(y)).
inline double barker_acceptance(double x, double y, const DensityModel& p0, const DensityModel& p1) {
  const double a = p0.pdf(y) * p1.pdf(x);
  const double b = p0.pdf(x) * p1.pdf(y);
  if (!(a + b > 0.0))
    throw std::domain_error("barker_acceptance: zero denominator");
  return a / (a + b);
}

/// O_M by trapezoid rule on a symmetric n_grid x n_grid lattice over the
/// union support window. Summation over i <= j only, so the result is
/// bit-identical under swapping p0 and p1.
inline OverlapEstimate om_quadrature(const DensityModel& p0, const DensityModel& p1, Eigen::Index n_grid = 801) {
  OverlapEstimate e;
  e.measure = Measure::OM;
  e.method = Method::quadrature;
  e.n_points = n_grid;
  if (detail::supports_disjoint(p0, p1)) {
    e.degenerate_support = true;
    return e;
  }
  const auto g = detail::union_grid(p0, p1, n_grid);
  const Eigen::ArrayXd f0 = detail::eval_pdf(p0, g.x) * g.w;
  const Eigen::ArrayXd f1 = detail::eval_pdf(p1, g.x) * g.w;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n_grid; ++i) {
    acc += std::min(f0[i] * f1[i], f1[i] * f0[i]);
    for (Eigen::Index j = i + 1; j < n_grid; ++j)
      acc += 2.0 * std::min(f0[i] * f1[j], f0[j] * f1[i]);
  }
  e.value = detail::clamp_unit(acc, "om_quadrature");
  return e;
}

/// Complement form 1 - (1/2) integral of |p0(x)p1(y) - p0(y)p1(x)| on the
/// same lattice; agrees with om_quadrature within quadrature error.
inline double om_complement_quadrature(const DensityModel& p0, const DensityModel& p1, Eigen::Index n_grid = 801) {
  const auto g = detail::union_grid(p0, p1, n_grid);
  const Eigen::ArrayXd f0 = detail::eval_pdf(p0, g.x) * g.w;
  const Eigen::ArrayXd f1 = detail::eval_pdf(p1, g.x) * g.w;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n_grid; ++i)
    for (Eigen::Index j = i + 1; j < n_grid; ++j)
      acc += 2.0 * std::abs(f0[i] * f1[j] - f0[j] * f1[i]);
  return 1.0 - 0.5 * acc;
}

/// Monte Carlo O_M: mean of the MH acceptance over X ~ p0, Y ~ p1.
inline OverlapEstimate om_monte_carlo(const DensityModel& p0, const DensityModel& p1,
                                      Eigen::Index n_draws, std::uint64_t seed) {
  if (n_draws < 100)
    throw std::invalid_argument("om_monte_carlo: n_draws must be >= 100");
  const Eigen::VectorXd xs = p0.draw(n_draws, SplitMix64::derive(seed, 0));
  const Eigen::VectorXd ys = p1.draw(n_draws, SplitMix64::derive(seed, 1));
  double sum = 0.0, sumsq = 0.0;
  for (Eigen::Index i = 0; i < n_draws; ++i) {
    const double a = mh_acceptance(xs[i], ys[i], p0, p1);
    sum += a;
    sumsq += a * a;
  }
  const double n = static_cast<double>(n_draws);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  OverlapEstimate e;
  e.measure = Measure::OM;
  e.method = Method::monte_carlo;
  e.value = detail::clamp_unit(mean, "om_monte_carlo");
  e.std_error = std::sqrt(var / n);
  e.n_points = n_draws;
  e.seed = seed;
  return e;
}

/// Classical overlap coefficient: 1-D trapezoid of min{p0, p1}.
inline OverlapEstimate ovl_quadrature(const DensityModel& p0, const DensityModel& p1, Eigen::Index n_grid = 2001) {
  OverlapEstimate e;
  e.measure = Measure::OVL;
  e.method = Method::quadrature;
  e.n_points = n_grid;
  if (detail::supports_disjoint(p0, p1)) {
    e.degenerate_support = true;
    return e;
  }
  const auto g = detail::union_grid(p0, p1, n_grid);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n_grid; ++i)
    acc += g.w[i] * std::min(p0.pdf(g.x[i]), p1.pdf(g.x[i]));
  e.value = detail::clamp_unit(acc, "ovl_quadrature");
  return e;
}

/// Barker overlap O_B = 2 integral of p0(y)p1(x)p0(x)p1(y) / (p0(y)p1(x) + p0(x)p1(y)).
inline OverlapEstimate ob_quadrature(const DensityModel& p0, const DensityModel& p1, Eigen::Index n_grid = 801) {
  OverlapEstimate e;
  e.measure = Measure::OB;
  e.method = Method::quadrature;
  e.n_points = n_grid;
  if (detail::supports_disjoint(p0, p1)) {
    e.degenerate_support = true;
    return e;
  }
  const auto g = detail::union_grid(p0, p1, n_grid);
  const Eigen::ArrayXd f0 = detail::eval_pdf(p0, g.x) * g.w;
  const Eigen::ArrayXd f1 = detail::eval_pdf(p1, g.x) * g.w;
  double acc = 0.0;
  std::int64_t skipped = 0;
  for (Eigen::Index i = 0; i < n_grid; ++i) {
    for (Eigen::Index j = i; j < n_grid; ++j) {
      const double a = f0[i] * f1[j];
      const double b = f0[j] * f1[i];
      const double mult = (i == j) ? 1.0 : 2.0;
      if (a + b > 0.0)
        acc += mult * 2.0 * a * b / (a + b);
      else
        ++skipped;
    }
  }
  e.value = detail::clamp_unit(acc, "ob_quadrature");
  e.skipped_points = skipped;
  return e;
}

/// Monte Carlo O_B: 2 * mean of the Barker acceptance over X ~ p0, Y ~ p1.
inline OverlapEstimate ob_monte_carlo(const DensityModel& p0, const DensityModel& p1,
                                      Eigen::Index n_draws, std::uint64_t seed) {
  if (n_draws < 100)
    throw std::invalid_argument("ob_monte_carlo: n_draws must be >= 100");
  const Eigen::VectorXd xs = p0.draw(n_draws, SplitMix64::derive(seed, 0));
  const Eigen::VectorXd ys = p1.draw(n_draws, SplitMix64::derive(seed, 1));
  double sum = 0.0, sumsq = 0.0;
  for (Eigen::Index i = 0; i < n_draws; ++i) {
    const double a = 2.0 * barker_acceptance(xs[i], ys[i], p0, p1);
    sum += a;
    sumsq += a * a;
  }
  const double n = static_cast<double>(n_draws);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  OverlapEstimate e;
  e.measure = Measure::OB;
  e.method = Method::monte_carlo;
  e.value = detail::clamp_unit(mean, "ob_monte_carlo");
  e.std_error = std::sqrt(var / n);
  e.n_points = n_draws;
  e.seed = seed;
  return e;
}

/// Crossmatch limit O_C = 2 integral of p0 p1 / (p0 + p1).
inline OverlapEstimate oc_quadrature(const DensityModel& p0, const DensityModel& p1, Eigen::Index n_grid = 2001) {
  OverlapEstimate e;
  e.measure = Measure::OC;
  e.method = Method::quadrature;
  e.n_points = n_grid;
  if (detail::supports_disjoint(p0, p1)) {
    e.degenerate_support = true;
    return e;
  }
  const auto g = detail::union_grid(p0, p1, n_grid);
  double acc = 0.0;
  std::int64_t skipped = 0;
  for (Eigen::Index i = 0; i < n_grid; ++i) {
    const double a = p0.pdf(g.x[i]);
    const double b = p1.pdf(g.x[i]);
    if (a + b > 0.0)
      acc += g.w[i] * 2.0 * a * b / (a + b);
    else
      ++skipped;
  }
  e.value = detail::clamp_unit(acc, "oc_quadrature");
  e.skipped_points = skipped;
  return e;
}

} // namespace overlap
