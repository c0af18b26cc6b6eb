#include <doctest.h>

#include <cmath>
#include <vector>

#include "overlap/measures.hpp"
#include "oracles.hpp"

using namespace overlap;

namespace {
const DensityModel n01 = normal_density(0.0, 1.0);

double ovl_equal_variance(double theta) { return 2.0 * norm_cdf(-std::abs(theta) / 2.0); }
} // namespace

TEST_CASE("closed form q") {
  CHECK(q_normal_closed_form(0.0, 1.0).value == doctest::Approx(1.0));
  CHECK(std::abs(q_normal_closed_form(0.164, 1.0).value - 0.91) < 0.005);
  CHECK(q_normal_closed_form(0.164, 1.0).value ==
        doctest::Approx(q_normal_closed_form(-0.164, 1.0).value));
  CHECK_THROWS_AS(q_normal_closed_form(1.0, 0.0), std::invalid_argument);

  // Solve 2(1 - Phi(theta/sqrt(2))) = 0.5 with the independent series cdf.
  double lo = 0.0, hi = 4.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (2.0 * (1.0 - oracles::phi_series(mid / M_SQRT2)) > 0.5 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(0.9539).epsilon(2e-4));
  CHECK(std::abs(q_normal_closed_form(0.9539, 1.0).value - 0.5) < 1e-3);
}

TEST_CASE("mh acceptance") {
  const auto n11 = normal_density(1.0, 1.0);
  CHECK(mh_acceptance(0.7, 0.7, n01, n11) == doctest::Approx(1.0));
  for (double x : {-1.0, 0.0, 2.0})
    for (double y : {-0.5, 0.5})
      CHECK(mh_acceptance(x, y, n01, n01) == doctest::Approx(1.0));
  // phi(1)phi(-1)/(phi(0)phi(0)) = e^{-1}
  CHECK(mh_acceptance(0.0, 1.0, n01, n11) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("om quadrature") {
  CHECK(om_quadrature(n01, n01, 801).value == doctest::Approx(1.0).epsilon(1e-6));

  const auto p1 = normal_density(0.164, 1.0);
  CHECK(std::abs(om_quadrature(n01, p1, 801).value - q_normal_closed_form(0.164, 1.0).value) < 1e-4);
  CHECK(std::abs(om_quadrature(n01, p1, 801).value - 0.9077) < 1e-3);

  CHECK(om_quadrature(n01, normal_density(20.0, 1.0), 801).value < 1e-6);

  // Disjoint numeric supports.
  const auto far = normal_density(100.0, 1.0);
  const auto e = om_quadrature(n01, far, 801);
  CHECK(e.value == 0.0);
  CHECK(e.degenerate_support);

  CHECK_THROWS_AS(om_quadrature(n01, p1, 100), std::invalid_argument); // even
  CHECK_THROWS_AS(om_quadrature(n01, p1, 99), std::invalid_argument);  // too small
}

TEST_CASE("om quadrature symmetry is exact") {
  const auto p1 = normal_density(0.7, 1.4);
  CHECK(om_quadrature(n01, p1, 401).value == om_quadrature(p1, n01, 401).value);
}

TEST_CASE("closed form vs quadrature across theta grid") {
  for (double theta : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto p1 = normal_density(theta, 1.0);
    CHECK(std::abs(om_quadrature(n01, p1, 801).value - q_normal_closed_form(theta, 1.0).value) < 1e-4);
  }
}

TEST_CASE("complement identity") {
  for (double theta : {0.164, 1.0, 2.5}) {
    const auto p1 = normal_density(theta, 1.0);
    CHECK(std::abs(om_quadrature(n01, p1, 801).value - om_complement_quadrature(n01, p1, 801)) < 1e-6);
  }
}

TEST_CASE("om monte carlo") {
  const auto same = om_monte_carlo(n01, n01, 1000, 3);
  CHECK(same.value == 1.0);
  CHECK(same.std_error == 0.0);

  const auto p1 = normal_density(0.164, 1.0);
  const auto e = om_monte_carlo(n01, p1, 100000, 17);
  CHECK(e.std_error > 0.0);
  CHECK(std::abs(e.value - 0.9077) < 3.0 * e.std_error);

  const auto p2 = normal_density(1.0, 1.0);
  const auto e2 = om_monte_carlo(n01, p2, 100000, 17);
  const double target = 2.0 * (1.0 - oracles::phi_series(1.0 / M_SQRT2));
  CHECK(target == doctest::Approx(0.4795).epsilon(1e-3));
  CHECK(std::abs(e2.value - target) < 3.0 * e2.std_error);

  // Determinism.
  const auto r1 = om_monte_carlo(n01, p1, 1000, 5);
  const auto r2 = om_monte_carlo(n01, p1, 1000, 5);
  CHECK(r1.value == r2.value);

  CHECK_THROWS_AS(om_monte_carlo(n01, p1, 99, 1), std::invalid_argument);
}

TEST_CASE("mc symmetry within combined std error") {
  const auto p1 = normal_density(0.8, 1.3);
  const auto ab = om_monte_carlo(n01, p1, 50000, 13);
  const auto ba = om_monte_carlo(p1, n01, 50000, 14);
  CHECK(std::abs(ab.value - ba.value) < 3.0 * (ab.std_error + ba.std_error));
}

TEST_CASE("mc consistency: shrinking std errors near the quadrature value") {
  const auto p1 = normal_density(0.5, 1.0);
  const double ref = om_quadrature(n01, p1, 801).value;
  double prev_se = 1e9;
  for (Eigen::Index n : {1000, 10000, 100000}) {
    const auto e = om_monte_carlo(n01, p1, n, 11);
    CHECK(e.std_error < prev_se);
    CHECK(std::abs(e.value - ref) < 4.0 * e.std_error);
    prev_se = e.std_error;
  }
}

TEST_CASE("ovl quadrature") {
  CHECK(ovl_quadrature(n01, n01, 2001).value == doctest::Approx(1.0).epsilon(1e-8));

  // Equal-variance normal closed form 2 Phi(-|theta|/2), verified by a
  // 10^6-point brute-force quadrature.
  for (double theta : {0.164, 3.0}) {
    const auto p1 = normal_density(theta, 1.0);
    const double brute = oracles::quadrature(
        [&](double x) { return std::min(n01.pdf(x), p1.pdf(x)); }, -12.0, 15.0, 1000000);
    CHECK(ovl_equal_variance(theta) == doctest::Approx(brute).epsilon(1e-6));
    CHECK(std::abs(ovl_quadrature(n01, p1, 2001).value - ovl_equal_variance(theta)) < 1e-4);
  }
  CHECK(ovl_equal_variance(0.164) == doctest::Approx(0.9346).epsilon(1e-4));
  CHECK(ovl_equal_variance(3.0) == doctest::Approx(0.1336).epsilon(1e-3));
}

TEST_CASE("ob quadrature and monte carlo") {
  CHECK(ob_quadrature(n01, n01, 801).value == doctest::Approx(1.0).epsilon(1e-6));

  const auto p1 = normal_density(0.164, 1.0);
  const double ob = ob_quadrature(n01, p1, 801).value;
  const double om = om_quadrature(n01, p1, 801).value;
  CHECK(ob >= om - 1e-8); // min{a,b} <= 2ab/(a+b) pointwise
  CHECK(ob <= 1.0);
  // Regression constant: 801-point quadrature, stable to 1601 points.
  CHECK(ob == doctest::Approx(0.9867289307).epsilon(1e-6));

  const auto pt = normal_density(1.0, 1.0);
  const auto mc = ob_monte_carlo(n01, pt, 100000, 23);
  CHECK(std::abs(mc.value - ob_quadrature(n01, pt, 801).value) < 3.0 * mc.std_error);
}

TEST_CASE("oc quadrature") {
  CHECK(oc_quadrature(n01, n01, 2001).value == doctest::Approx(1.0).epsilon(1e-8));
  const auto p3 = normal_density(3.0, 1.0);
  CHECK(oc_quadrature(n01, p3, 2001).value >= ovl_equal_variance(3.0) - 1e-8);
  CHECK(oc_quadrature(n01, normal_density(20.0, 1.0), 2001).value < 1e-6);
}

TEST_CASE("ordering O_M <= O_B <= 1 and OVL <= O_C <= 1") {
  for (double theta : {0.0, 0.164, 0.5, 1.0, 2.0, 4.0}) {
    const auto p1 = normal_density(theta, 1.0);
    const double om = om_quadrature(n01, p1, 401).value;
    const double ob = ob_quadrature(n01, p1, 401).value;
    const double ovl = ovl_quadrature(n01, p1, 2001).value;
    const double oc = oc_quadrature(n01, p1, 2001).value;
    CHECK(om <= ob + 1e-8);
    CHECK(ob <= 1.0 + 1e-8);
    CHECK(ovl <= oc + 1e-8);
    CHECK(oc <= 1.0 + 1e-8);
  }
}
