#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "overlap/rng.hpp"

namespace overlap {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;

/// Standard normal pdf.
inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Standard normal cdf, accurate to ~1e-15 via erfc.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// Standard normal quantile: Acklam's rational approximation refined by one
/// Newton step, giving |Phi(result) - p| well below 1e-12.
inline double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("norm_quantile: p must lie in (0,1)");

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};

  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Newton step on Phi(x) - p.
  double e = norm_cdf(x) - p;
  x -= e / norm_pdf(x);
  return x;
}

/// Evaluable, sampleable univariate density: a normal or a Gaussian-kernel
/// mixture fitted to data. Immutable after construction.
class DensityModel {
public:
  enum class Kind { normal, kde };

  static DensityModel normal(double mean, double sd) {
    if (!(sd > 0.0))
      throw std::invalid_argument("normal density: sd must be positive");
    DensityModel m;
    m.kind_ = Kind::normal;
    m.mean_ = mean;
    m.sd_ = sd;
    m.lo_ = mean - 8.0 * sd;
    m.hi_ = mean + 8.0 * sd;
    return m;
  }

  /// Gaussian KDE; bandwidth <= 0 requests Silverman's rule
  /// 1.06 * s * n^(-1/5) with s the sample standard deviation.
  static DensityModel kde(std::vector<double> samples, double bandwidth = 0.0) {
    if (samples.size() < 2)
      throw std::invalid_argument("kde: need at least 2 samples");
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    double s = std::sqrt(ss / (n - 1.0));
    double h = bandwidth;
    if (!(h > 0.0)) {
      if (s == 0.0)
        throw std::invalid_argument("kde: zero sample variance and no explicit bandwidth");
      h = 1.06 * s * std::pow(n, -0.2);
    }
    std::sort(samples.begin(), samples.end());
    DensityModel m;
    m.kind_ = Kind::kde;
    m.samples_ = std::move(samples);
    m.bandwidth_ = h;
    m.lo_ = m.samples_.front() - 4.0 * h;
    m.hi_ = m.samples_.back() + 4.0 * h;
    return m;
  }

  Kind kind() const { return kind_; }
  double mean() const { return mean_; }
  double sd() const { return sd_; }
  double bandwidth() const { return bandwidth_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<double>& samples() const { return samples_; }

  double pdf(double x) const {
    if (kind_ == Kind::normal)
      return norm_pdf((x - mean_) / sd_) / sd_;
    // Kernels beyond 8.5 bandwidths contribute < 1e-16 of their mass.
    const double cut = 8.5 * bandwidth_;
    auto lo = std::lower_bound(samples_.begin(), samples_.end(), x - cut);
    auto hi = std::upper_bound(samples_.begin(), samples_.end(), x + cut);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it)
      acc += norm_pdf((x - *it) / bandwidth_);
    return acc / (static_cast<double>(samples_.size()) * bandwidth_);
  }

  double cdf(double x) const {
    if (kind_ == Kind::normal)
      return norm_cdf((x - mean_) / sd_);
    const double cut = 8.5 * bandwidth_;
    auto lo = std::lower_bound(samples_.begin(), samples_.end(), x - cut);
    auto hi = std::upper_bound(samples_.begin(), samples_.end(), x + cut);
    double acc = static_cast<double>(std::distance(samples_.begin(), lo));
    for (auto it = lo; it != hi; ++it)
      acc += norm_cdf((x - *it) / bandwidth_);
    return acc / static_cast<double>(samples_.size());
  }

  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0))
      throw std::domain_error("quantile: p must lie in (0,1)");
    if (kind_ == Kind::normal)
      return mean_ + sd_ * norm_quantile(p);
    // Bisection on the mixture cdf over the support window.
    double a = lo_, b = hi_;
    for (int i = 0; i < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++i) {
      double mid = 0.5 * (a + b);
      (cdf(mid) < p ? a : b) = mid;
    }
    return 0.5 * (a + b);
  }

  /// n i.i.d. draws; bit-identical for identical (model, n, seed).
  Eigen::VectorXd draw(Eigen::Index n, std::uint64_t seed) const {
    if (n < 1)
      throw std::invalid_argument("draw: n must be >= 1");
    SplitMix64 gen(seed);
    Eigen::VectorXd out(n);
    if (kind_ == Kind::normal) {
      for (Eigen::Index i = 0; i < n; ++i)
        out[i] = mean_ + sd_ * norm_quantile(gen.next_uniform());
    } else {
      const auto m = samples_.size();
      for (Eigen::Index i = 0; i < n; ++i) {
        auto k = std::min<std::size_t>(m - 1, static_cast<std::size_t>(gen.next_uniform() * static_cast<double>(m)));
        out[i] = samples_[k] + bandwidth_ * norm_quantile(gen.next_uniform());
      }
    }
    return out;
  }

private:
  DensityModel() = default;

  Kind kind_ = Kind::normal;
  double mean_ = 0.0;
  double sd_ = 1.0;
  double bandwidth_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> samples_;
};

inline DensityModel normal_density(double mean, double sd) {
  return DensityModel::normal(mean, sd);
}

inline DensityModel kde_fit(const std::vector<double>& samples, double bandwidth = 0.0) {
  return DensityModel::kde(samples, bandwidth);
}

inline Eigen::VectorXd draw(const DensityModel& model, Eigen::Index n, std::uint64_t seed) {
  return model.draw(n, seed);
}

} // namespace overlap
