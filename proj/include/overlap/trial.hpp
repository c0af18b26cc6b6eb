#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "overlap/density.hpp"
#include "overlap/measures.hpp"

namespace overlap {

/// One-sided normal mean test parameters plus the interchangeability
/// threshold q0 for the q-based rule.
struct TrialConfig {
  std::int64_t n = 0;
  double sigma = 1.0;
  double alpha = 0.05;
  double q0 = 0.5;
  double theta0 = 0.0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("trial: n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("trial: sigma must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("trial: alpha must lie in (0,1)");
    if (!(q0 > 0.0 && q0 <= 1.0)) throw std::invalid_argument("trial: q0 must lie in (0,1]");
  }
};

struct TrialDecision {
  double xbar = 0.0;
  double critical_value = 0.0;
  double p_value = 0.0;
  bool reject_h0 = false;
  double q_at_estimate = 0.0;
  double theta_threshold_for_q0 = 0.0;
  bool q_rule_accepts_new = false;
  // p-value for H0: theta > q^{-1}(q0), reported without a decision.
  double p_value_vs_threshold = 0.0;
};

struct BootstrapSummary {
  std::int64_t b = 0;
  std::vector<double> q_tilde;
  double q05 = 0.0, q50 = 0.0, q95 = 0.0;
  double fraction_below_q0 = 0.0;
  std::uint64_t seed = 0;
};

/// c_{n,alpha} = (sigma / sqrt(n)) Phi^{-1}(1 - alpha).
inline double critical_value(const TrialConfig& cfg) {
  cfg.validate();
  return cfg.sigma / std::sqrt(static_cast<double>(cfg.n)) * norm_quantile(1.0 - cfg.alpha);
}

/// p = 1 - Phi((xbar - theta0) sqrt(n) / sigma).
inline double p_value(double xbar, const TrialConfig& cfg) {
  cfg.validate();
  return 1.0 - norm_cdf((xbar - cfg.theta0) * std::sqrt(static_cast<double>(cfg.n)) / cfg.sigma);
}

/// Mean shift at which q drops to q0: sigma sqrt(2) Phi^{-1}(1 - q0/2).
inline double theta_threshold(double q0, double sigma) {
  if (!(q0 > 0.0 && q0 <= 1.0))
    throw std::domain_error("theta_threshold: q0 must lie in (0,1]");
  if (!(sigma > 0.0))
    throw std::invalid_argument("theta_threshold: sigma must be positive");
  return sigma * M_SQRT2 * norm_quantile(1.0 - q0 / 2.0);
}

/// Both rules for one observed mean: the classical rejection and the q-rule
/// q(xbar) < q0. The boundary xbar = critical value does not reject
/// (p = alpha is not < alpha).
inline TrialDecision decide(double xbar, const TrialConfig& cfg) {
  cfg.validate();
  TrialDecision d;
  d.xbar = xbar;
  d.critical_value = critical_value(cfg);
  d.p_value = p_value(xbar, cfg);
  d.reject_h0 = xbar > d.critical_value;
  d.q_at_estimate = q_normal_closed_form(xbar - cfg.theta0, cfg.sigma).value;
  d.theta_threshold_for_q0 = theta_threshold(cfg.q0, cfg.sigma);
  d.q_rule_accepts_new = d.q_at_estimate < cfg.q0;
  d.p_value_vs_threshold =
      1.0 - norm_cdf((xbar - cfg.theta0 - d.theta_threshold_for_q0) *
                     std::sqrt(static_cast<double>(cfg.n)) / cfg.sigma);
  return d;
}

namespace detail {

inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace detail

/// Parametric bootstrap: each replication draws n observations from
/// N(theta_hat, sigma^2), takes theta_tilde = sample mean and
/// q_tilde = q(theta_tilde). Deterministic given seed.
inline BootstrapSummary parametric_bootstrap(double theta_hat, const TrialConfig& cfg,
                                             std::int64_t b, std::uint64_t seed) {
  cfg.validate();
  if (b < 1) throw std::invalid_argument("parametric_bootstrap: b must be >= 1");
  const DensityModel model = normal_density(theta_hat, cfg.sigma);
  BootstrapSummary s;
  s.b = b;
  s.seed = seed;
  s.q_tilde.reserve(static_cast<std::size_t>(b));
  std::int64_t below = 0;
  for (std::int64_t r = 0; r < b; ++r) {
    const Eigen::VectorXd xs = model.draw(cfg.n, SplitMix64::derive(seed, static_cast<std::uint64_t>(r)));
    const double theta_tilde = xs.mean();
    const double q = q_normal_closed_form(theta_tilde - cfg.theta0, cfg.sigma).value;
    s.q_tilde.push_back(q);
    if (q < cfg.q0) ++below;
  }
  std::vector<double> sorted = s.q_tilde;
  std::sort(sorted.begin(), sorted.end());
  s.q05 = detail::quantile_sorted(sorted, 0.05);
  s.q50 = detail::quantile_sorted(sorted, 0.50);
  s.q95 = detail::quantile_sorted(sorted, 0.95);
  s.fraction_below_q0 = static_cast<double>(below) / static_cast<double>(b);
  return s;
}

} // namespace overlap
