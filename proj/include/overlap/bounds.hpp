#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "overlap/density.hpp"
#include "overlap/measures.hpp"

namespace overlap {

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false; // lhs <= rhs up to slack tolerance
  double slack = 0.0;     // rhs - lhs
};

struct BoundsReport {
  double hellinger_sq = 0.0;
  double d_om = 0.0;          // 1 - O_M
  double ovl = 0.0;
  double om = 0.0;
  double bhattacharyya = 0.0; // integral of sqrt(p0 p1)
  std::vector<BoundCheck> checks;
};

namespace detail {

// Quadrature noise below this magnitude does not count as a violation.
inline constexpr double kSlackTol = 1e-8;

inline BoundCheck make_check(std::string name, double lhs, double rhs) {
  BoundCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.satisfied = c.slack >= -kSlackTol;
  return c;
}

} // namespace detail

/// Bhattacharyya coefficient integral of sqrt(p0 p1), by trapezoid.
inline double bhattacharyya(const DensityModel& p0, const DensityModel& p1, Eigen::Index n_grid = 2001) {
  const auto g = detail::union_grid(p0, p1, n_grid);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n_grid; ++i)
    acc += g.w[i] * std::sqrt(p0.pdf(g.x[i]) * p1.pdf(g.x[i]));
  return std::min(acc, 1.0);
}

/// Hellinger distance (integral of (sqrt(p0) - sqrt(p1))^2)^(1/2), in [0, sqrt(2)].
inline double hellinger(const DensityModel& p0, const DensityModel& p1, Eigen::Index n_grid = 2001) {
  const auto g = detail::union_grid(p0, p1, n_grid);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n_grid; ++i) {
    const double d = std::sqrt(p0.pdf(g.x[i])) - std::sqrt(p1.pdf(g.x[i]));
    acc += g.w[i] * d * d;
  }
  return std::sqrt(std::clamp(acc, 0.0, 2.0));
}

/// Sandwich of d = 1 - O_M by the Hellinger distance:
/// lower bound d >= dH^2 (1 - dH^2/4) holds; the upper bound d <= 4 dH^2 is
/// evaluated and reported verbatim (it fails numerically for close densities,
/// where d is first order in the mean shift and dH^2 is second order).
inline std::vector<BoundCheck> check_hellinger_sandwich(const DensityModel& p0, const DensityModel& p1,
                                                        Eigen::Index n_grid = 801) {
  const double om = om_quadrature(p0, p1, n_grid).value;
  const double d = 1.0 - om;
  const double h = hellinger(p0, p1, std::max<Eigen::Index>(n_grid, 2001));
  const double h2 = h * h;
  std::vector<BoundCheck> out;
  out.push_back(detail::make_check("hellinger_lower: dH^2(1-dH^2/4) <= d", h2 * (1.0 - h2 / 4.0), d));
  out.push_back(detail::make_check("hellinger_upper: d <= 4 dH^2", d, 4.0 * h2));
  return out;
}

/// O_M <= (integral sqrt(p0 p1))^2 and O_M <= (1 - (1 - OVL)^2)^2.
inline std::vector<BoundCheck> check_ovl_bound(const DensityModel& p0, const DensityModel& p1,
                                               Eigen::Index n_grid = 801) {
  const double om = om_quadrature(p0, p1, n_grid).value;
  const double bc = bhattacharyya(p0, p1, std::max<Eigen::Index>(n_grid, 2001));
  const double ovl = ovl_quadrature(p0, p1, std::max<Eigen::Index>(n_grid, 2001)).value;
  const double ovl_rhs = std::pow(1.0 - (1.0 - ovl) * (1.0 - ovl), 2.0);
  std::vector<BoundCheck> out;
  out.push_back(detail::make_check("om <= bhattacharyya^2", om, bc * bc));
  out.push_back(detail::make_check("om <= (1-(1-ovl)^2)^2", om, ovl_rhs));
  return out;
}

/// Youden index J(c) = F(c) + 1 - G(c) for the half-line cutoff c,
/// with F the cdf of p0 and G the cdf of p1.
inline double youden_index(const DensityModel& p0, const DensityModel& p1, double cutoff) {
  return p0.cdf(cutoff) + 1.0 - p1.cdf(cutoff);
}

/// O_M via the Youden-style decomposition
///   O_M = integral F(A(y)) g(y) dy + integral Gbar(A(y)) f(y) dy,
/// A(y) = {x : f(x)/g(x) <= f(y)/g(y)} with ties included. For equal-sd
/// normal pairs A(y) is a half-line and the cdfs are evaluated exactly;
/// otherwise A(y) is realized as a grid mask via ratio sorting. Independent
/// of the double-integral quadrature route.
inline OverlapEstimate om_youden_decomposition(const DensityModel& p0, const DensityModel& p1,
                                               Eigen::Index n_grid = 2001) {
  OverlapEstimate e;
  e.measure = Measure::OM;
  e.method = Method::quadrature;
  e.n_points = n_grid;

  const auto g = detail::union_grid(p0, p1, n_grid);

  const bool equal_sd_normal = p0.kind() == DensityModel::Kind::normal &&
                               p1.kind() == DensityModel::Kind::normal &&
                               p0.sd() == p1.sd();
  if (equal_sd_normal) {
    // Ratio f/g is monotone in x: A(y) = (-inf, y] when increasing,
    // [y, inf) when decreasing.
    const bool increasing = p0.mean() > p1.mean();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n_grid; ++i) {
      const double y = g.x[i];
      const double fa = increasing ? p0.cdf(y) : 1.0 - p0.cdf(y);       // F(A(y))
      const double gb = increasing ? 1.0 - p1.cdf(y) : p1.cdf(y);       // Gbar(A(y))
      acc += g.w[i] * (fa * p1.pdf(y) + gb * p0.pdf(y));
    }
    e.value = detail::clamp_unit(acc, "om_youden_decomposition");
    return e;
  }

  const Eigen::ArrayXd f = detail::eval_pdf(p0, g.x);
  const Eigen::ArrayXd gg = detail::eval_pdf(p1, g.x);
  // Ratio with g = 0 treated as +inf; sort indices by ratio, then F(A(y))
  // and G(A(y)) are prefix sums in ratio order.
  std::vector<Eigen::Index> order(n_grid);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto ratio = [&](Eigen::Index i) {
    if (gg[i] > 0.0) return f[i] / gg[i];
    return f[i] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ratio(a) < ratio(b); });

  // Prefix masses including ties: walk tie groups so that every member of a
  // group sees the full group mass (the set uses <=).
  Eigen::ArrayXd f_mass(n_grid), g_mass(n_grid);
  double fa = 0.0, ga = 0.0;
  for (Eigen::Index k = 0; k < n_grid;) {
    Eigen::Index k2 = k;
    const double r = ratio(order[k]);
    double fgrp = 0.0, ggrp = 0.0;
    while (k2 < n_grid && ratio(order[k2]) == r) {
      fgrp += g.w[order[k2]] * f[order[k2]];
      ggrp += g.w[order[k2]] * gg[order[k2]];
      ++k2;
    }
    fa += fgrp;
    ga += ggrp;
    for (Eigen::Index j = k; j < k2; ++j) {
      f_mass[order[j]] = fa;
      g_mass[order[j]] = ga;
    }
    k = k2;
  }

  double acc = 0.0;
  for (Eigen::Index i = 0; i < n_grid; ++i)
    acc += g.w[i] * (f_mass[i] * gg[i] + (1.0 - g_mass[i]) * f[i]);
  e.value = detail::clamp_unit(acc, "om_youden_decomposition");
  return e;
}

/// Full report: O_M, OVL, the distance d = 1 - O_M, Hellinger and
/// Bhattacharyya quantities, plus every inequality check.
inline BoundsReport bounds_report(const DensityModel& p0, const DensityModel& p1,
                                  Eigen::Index n_grid_2d = 801, Eigen::Index n_grid_1d = 2001) {
  BoundsReport r;
  r.om = om_quadrature(p0, p1, n_grid_2d).value;
  r.ovl = ovl_quadrature(p0, p1, n_grid_1d).value;
  r.d_om = 1.0 - r.om;
  const double h = hellinger(p0, p1, n_grid_1d);
  r.hellinger_sq = h * h;
  r.bhattacharyya = bhattacharyya(p0, p1, n_grid_1d);
  for (auto& c : check_hellinger_sandwich(p0, p1, n_grid_2d)) r.checks.push_back(std::move(c));
  for (auto& c : check_ovl_bound(p0, p1, n_grid_2d)) r.checks.push_back(std::move(c));
  return r;
}

} // namespace overlap
