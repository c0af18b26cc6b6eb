#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace overlap {

/// Finite-set overlap measures: the overlap coefficient |S|/min{|A|,|B|},
/// the Jaccard index |S|/(|A|+|B|-|S|), and the geometric-mean variant
/// |S|/sqrt(|A||B|), which sits between them.
struct FiniteSetPair {
  std::unordered_set<std::string> a;
  std::unordered_set<std::string> b;

  std::size_t intersection_size() const {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    std::size_t k = 0;
    for (const auto& e : small)
      if (large.count(e)) ++k;
    return k;
  }
};

namespace detail {

inline void require_nonempty(const FiniteSetPair& p) {
  if (p.a.empty() || p.b.empty())
    throw std::domain_error("set overlap: sets must be nonempty");
}

} // namespace detail

inline double overlap_coefficient(const FiniteSetPair& p) {
  detail::require_nonempty(p);
  return static_cast<double>(p.intersection_size()) /
         static_cast<double>(std::min(p.a.size(), p.b.size()));
}

inline double jaccard(const FiniteSetPair& p) {
  detail::require_nonempty(p);
  const double s = static_cast<double>(p.intersection_size());
  return s / (static_cast<double>(p.a.size() + p.b.size()) - s);
}

/// Closed form |S| / sqrt(|A||B|).
inline double om_sets(const FiniteSetPair& p) {
  detail::require_nonempty(p);
  return static_cast<double>(p.intersection_size()) /
         std::sqrt(static_cast<double>(p.a.size()) * static_cast<double>(p.b.size()));
}

/// Same quantity by the defining route: uniform masses 1/|A| and 1/|B|,
/// the double sum of min{p_A(x)p_B(y), p_A(y)p_B(x)} over the union, then
/// a square root. Must agree with om_sets.
inline double om_sets_double_sum(const FiniteSetPair& p) {
  detail::require_nonempty(p);
  std::vector<std::string> universe(p.a.begin(), p.a.end());
  for (const auto& e : p.b)
    if (!p.a.count(e)) universe.push_back(e);
  const double ma = 1.0 / static_cast<double>(p.a.size());
  const double mb = 1.0 / static_cast<double>(p.b.size());
  double acc = 0.0;
  for (const auto& x : universe) {
    const double pax = p.a.count(x) ? ma : 0.0;
    const double pbx = p.b.count(x) ? mb : 0.0;
    for (const auto& y : universe) {
      const double pay = p.a.count(y) ? ma : 0.0;
      const double pby = p.b.count(y) ? mb : 0.0;
      acc += std::min(pax * pby, pay * pbx);
    }
  }
  return std::sqrt(acc);
}

} // namespace overlap
