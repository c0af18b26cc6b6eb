#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "overlap/measures.hpp"

namespace overlap {

/// Paired bivariate samples: A holds (X_i, Y_i) from the first half of the
/// inputs, B holds the swapped pairs (Y_j, X_j) from the second half.
struct CrossSamples {
  Eigen::MatrixX2d a_points;
  Eigen::MatrixX2d b_points;
  bool truncated = false; // odd inputs had their last element dropped
};

struct MatchingResult {
  std::vector<int> permutation;  // involution without fixed points
  double total_distance = 0.0;
  int n_cross = 0;               // pairs with i <= n/2 < sigma(i), counted once
  double statistic_raw = 0.0;    // 4 n_cross / n, before clamping
  double statistic = 0.0;        // min{1, 4 n_cross / n}
  bool exact = false;
};

inline CrossSamples build_cross_samples(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("build_cross_samples: samples must have equal length");
  CrossSamples cs;
  if (x.size() % 2 == 1) {
    x.pop_back();
    y.pop_back();
    cs.truncated = true;
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 4)
    throw std::invalid_argument("build_cross_samples: need at least 4 samples");
  const Eigen::Index half = n / 2;
  cs.a_points.resize(half, 2);
  cs.b_points.resize(half, 2);
  for (Eigen::Index i = 0; i < half; ++i) {
    cs.a_points(i, 0) = x[i];
    cs.a_points(i, 1) = y[i];
    cs.b_points(i, 0) = y[half + i];
    cs.b_points(i, 1) = x[half + i];
  }
  return cs;
}

/// Symmetric n x n Euclidean distance matrix over the concatenated point
/// list [A then B]. With literal_cross_block the A-to-B block is filled as
/// d_E(A_j, B_j), column-constant; the default uses d_E(A_i, B_j).
inline Eigen::MatrixXd distance_matrix(const CrossSamples& cs, bool literal_cross_block = false) {
  const Eigen::Index half = cs.a_points.rows();
  const Eigen::Index n = 2 * half;
  Eigen::MatrixX2d pts(n, 2);
  pts.topRows(half) = cs.a_points;
  pts.bottomRows(half) = cs.b_points;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (pts.row(i) - pts.row(j)).norm();
      m(i, j) = d;
      m(j, i) = d;
    }
  }
  if (literal_cross_block) {
    for (Eigen::Index j = 0; j < half; ++j) {
      const double d = (cs.a_points.row(j) - cs.b_points.row(j)).norm();
      for (Eigen::Index i = 0; i < half; ++i) {
        m(i, half + j) = d;
        m(half + j, i) = d;
      }
    }
  }
  return m;
}

namespace detail {

// Exact minimum-weight perfect matching by bitmask DP over subsets; the
// lowest unmatched index is always paired first, partners scanned in
// ascending order with strict improvement, so ties resolve to the
// smallest index pair.
inline MatchingResult match_exact(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  const std::uint32_t full = (1u << n) - 1u;
  // best[mask] = minimum cost of perfectly matching the indices in mask.
  std::vector<double> best(full + 1, std::numeric_limits<double>::infinity());
  std::vector<int> partner(full + 1, -1); // partner of the lowest set bit
  best[0] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int i = 0;
    while (!(mask & (1u << i))) ++i; // lowest set bit
    for (int j = i + 1; j < n; ++j) {
      if (!(mask & (1u << j))) continue;
      const std::uint32_t rest = mask & ~((1u << i) | (1u << j));
      const double cand = best[rest] + m(i, j);
      if (cand < best[mask]) {
        best[mask] = cand;
        partner[mask] = j;
      }
    }
  }
  MatchingResult r;
  r.permutation.assign(n, -1);
  std::uint32_t mask = full;
  while (mask) {
    int i = 0;
    while (!(mask & (1u << i))) ++i;
    const int j = partner[mask];
    r.permutation[i] = j;
    r.permutation[j] = i;
    mask &= ~((1u << i) | (1u << j));
  }
  r.total_distance = best[full];
  r.exact = true;
  return r;
}

// Greedy nearest-pair construction then 2-opt pair exchange to a local
// optimum. Deterministic given input order; ties go to the smallest
// index pair.
inline MatchingResult match_heuristic(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  MatchingResult r;
  r.permutation.assign(n, -1);
  std::vector<char> used(n, 0);
  for (int step = 0; step < n / 2; ++step) {
    double bd = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (used[j]) continue;
        if (m(i, j) < bd) {
          bd = m(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    used[bi] = used[bj] = 1;
    r.permutation[bi] = bj;
    r.permutation[bj] = bi;
  }
  // 2-opt: for pairs (a,b) and (c,d), try (a,c)(b,d) and (a,d)(b,c).
  bool improved = true;
  while (improved) {
    improved = false;
    for (int a = 0; a < n && !improved; ++a) {
      const int b = r.permutation[a];
      if (b < a) continue;
      for (int c = a + 1; c < n && !improved; ++c) {
        const int d = r.permutation[c];
        if (d < c || c == b) continue;
        const double cur = m(a, b) + m(c, d);
        const double alt1 = m(a, c) + m(b, d);
        const double alt2 = m(a, d) + m(b, c);
        if (alt1 < cur - 1e-12 && alt1 <= alt2) {
          r.permutation[a] = c; r.permutation[c] = a;
          r.permutation[b] = d; r.permutation[d] = b;
          improved = true;
        } else if (alt2 < cur - 1e-12) {
          r.permutation[a] = d; r.permutation[d] = a;
          r.permutation[b] = c; r.permutation[c] = b;
          improved = true;
        }
      }
    }
  }
  r.total_distance = 0.0;
  for (int i = 0; i < n; ++i)
    if (r.permutation[i] > i) r.total_distance += m(i, r.permutation[i]);
  r.exact = false;
  return r;
}

} // namespace detail

/// Size boundary below which the exact bitmask-DP matcher runs.
inline constexpr int kExactMatchingLimit = 14;

/// Minimum-weight perfect matching on a symmetric distance matrix.
/// Exact for n <= kExactMatchingLimit, greedy + 2-opt beyond.
inline MatchingResult min_weight_matching(const Eigen::MatrixXd& m,
                                          int exact_limit = kExactMatchingLimit) {
  const auto n = m.rows();
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("min_weight_matching: n must be even and >= 4");
  MatchingResult r = (n <= exact_limit) ? detail::match_exact(m) : detail::match_heuristic(m);
  const auto half = static_cast<int>(n / 2);
  for (int i = 0; i < half; ++i)
    if (r.permutation[i] >= half) ++r.n_cross;
  r.statistic_raw = 4.0 * static_cast<double>(r.n_cross) / static_cast<double>(n);
  r.statistic = std::min(1.0, r.statistic_raw);
  return r;
}

/// Sample-based O_B estimate: build the paired bivariate samples, match,
/// and report min{1, 4 n_c / n}.
inline OverlapEstimate crossmatch_ob_estimate(const std::vector<double>& x,
                                              const std::vector<double>& y,
                                              int exact_limit = kExactMatchingLimit) {
  const CrossSamples cs = build_cross_samples(x, y);
  const MatchingResult r = min_weight_matching(distance_matrix(cs), exact_limit);
  OverlapEstimate e;
  e.measure = Measure::OB;
  e.method = Method::matching;
  e.value = r.statistic;
  e.n_points = 2 * cs.a_points.rows();
  return e;
}

} // namespace overlap
