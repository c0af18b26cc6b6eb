#include <doctest.h>

#include <cmath>

#include "overlap/trial.hpp"
#include "oracles.hpp"

using namespace overlap;

namespace {
TrialConfig paper_cfg() {
  TrialConfig cfg;
  cfg.n = 100;
  cfg.sigma = 1.0;
  cfg.alpha = 0.05;
  cfg.q0 = 0.5;
  return cfg;
}
} // namespace

TEST_CASE("critical value") {
  CHECK(std::abs(critical_value(paper_cfg()) - 0.16449) < 5e-5);

  auto cfg = paper_cfg();
  cfg.alpha = 0.5;
  CHECK(critical_value(cfg) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  cfg = paper_cfg();
  cfg.n = 400;
  cfg.sigma = 2.0;
  cfg.alpha = 0.05;
  CHECK(critical_value(cfg) == doctest::Approx(critical_value(paper_cfg())).epsilon(1e-12));

  cfg.n = 0;
  CHECK_THROWS_AS(critical_value(cfg), std::invalid_argument);
}

TEST_CASE("p value") {
  const auto cfg = paper_cfg();
  CHECK(p_value(critical_value(cfg), cfg) == doctest::Approx(cfg.alpha).epsilon(1e-10));
  CHECK(p_value(0.0, cfg) == doctest::Approx(0.5));
  // 1 - Phi(3) via the independent series cdf.
  CHECK(p_value(0.3, cfg) == doctest::Approx(1.0 - oracles::phi_series(3.0)).epsilon(1e-10));
  CHECK(p_value(0.3, cfg) == doctest::Approx(0.00135).epsilon(1e-2));
}

TEST_CASE("theta threshold") {
  CHECK(theta_threshold(1.0, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(theta_threshold(0.5, 1.0) == doctest::Approx(0.9539).epsilon(1e-3));
  for (double q0 = 0.1; q0 < 0.95; q0 += 0.1)
    CHECK(q_normal_closed_form(theta_threshold(q0, 1.0), 1.0).value == doctest::Approx(q0).epsilon(1e-8));
  CHECK_THROWS_AS(theta_threshold(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(theta_threshold(1.5, 1.0), std::domain_error);
}

TEST_CASE("decide: the illustration setting") {
  const auto cfg = paper_cfg();
  const auto d = decide(0.164, cfg);
  // 0.164 is the rounded print of the critical value 0.16449; under the
  // strict rule the exact p-value 0.0505 does not clear alpha = 0.05.
  CHECK_FALSE(d.reject_h0);
  CHECK(d.p_value == doctest::Approx(0.0505).epsilon(1e-3));
  CHECK(decide(0.1645, cfg).reject_h0);
  CHECK(d.q_at_estimate == doctest::Approx(0.9077).epsilon(1e-3));
  CHECK_FALSE(d.q_rule_accepts_new);

  const auto d2 = decide(1.2, cfg);
  CHECK(d2.reject_h0);
  CHECK(d2.q_rule_accepts_new);

  const auto d0 = decide(0.0, cfg);
  CHECK_FALSE(d0.reject_h0);
  CHECK_FALSE(d0.q_rule_accepts_new);

  // Boundary: p = alpha does not reject.
  const auto db = decide(critical_value(cfg), cfg);
  CHECK_FALSE(db.reject_h0);
}

TEST_CASE("tie consistency across random configurations") {
  SplitMix64 gen(88);
  for (int i = 0; i < 1000; ++i) {
    TrialConfig cfg;
    cfg.n = 1 + static_cast<std::int64_t>(gen.next_uniform() * 500);
    cfg.sigma = 0.1 + gen.next_uniform() * 3.0;
    cfg.alpha = 0.01 + gen.next_uniform() * 0.5;
    cfg.q0 = 0.05 + gen.next_uniform() * 0.9;
    const double xbar = -1.0 + gen.next_uniform() * 2.0;
    const auto d = decide(xbar, cfg);
    CHECK(d.reject_h0 == (d.p_value < cfg.alpha));
    CHECK(d.reject_h0 == (xbar > d.critical_value));
  }
}

TEST_CASE("q-rule monotone in xbar") {
  const auto cfg = paper_cfg();
  bool prev = false;
  for (double xbar = 0.0; xbar <= 3.0; xbar += 0.01) {
    const bool acc = decide(xbar, cfg).q_rule_accepts_new;
    CHECK((acc || !prev)); // once true, stays true
    prev = acc;
  }
  CHECK(prev);
}

TEST_CASE("parametric bootstrap") {
  const auto cfg = paper_cfg();

  SUBCASE("paper setting") {
    const auto s = parametric_bootstrap(0.164, cfg, 1000, 42);
    REQUIRE(s.q_tilde.size() == 1000);
    for (double q : s.q_tilde) {
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
    }
    CHECK(std::abs(s.q50 - 0.91) < 0.03);
    // theta_tilde ~ N(0.164, 0.01); reaching q < 0.5 needs theta > 0.954,
    // an ~8 standard error excursion.
    CHECK(s.fraction_below_q0 == 0.0);
  }

  SUBCASE("determinism") {
    const auto a = parametric_bootstrap(0.164, cfg, 200, 7);
    const auto b = parametric_bootstrap(0.164, cfg, 200, 7);
    REQUIRE(a.q_tilde.size() == b.q_tilde.size());
    for (std::size_t i = 0; i < a.q_tilde.size(); ++i)
      CHECK(a.q_tilde[i] == b.q_tilde[i]);
  }

  SUBCASE("b = 1") {
    const auto s = parametric_bootstrap(0.164, cfg, 1, 3);
    REQUIRE(s.q_tilde.size() == 1);
    CHECK(s.q_tilde[0] >= 0.0);
    CHECK(s.q_tilde[0] <= 1.0);
  }

  SUBCASE("degenerate sigma") {
    auto tiny = cfg;
    tiny.sigma = 1e-6;
    const auto s = parametric_bootstrap(0.164, tiny, 50, 4);
    const double q_at = q_normal_closed_form(0.164, tiny.sigma).value;
    for (double q : s.q_tilde)
      CHECK(std::abs(q - q_at) < 1e-6);
  }

  SUBCASE("coverage sanity") {
    // True theta = 1: the central 90% q-tilde interval should usually
    // contain q(1) = 0.4795.
    const double q_true = q_normal_closed_form(1.0, 1.0).value;
    int covered = 0;
    const int meta = 100;
    for (int r = 0; r < meta; ++r) {
      const auto data = normal_density(1.0, 1.0).draw(100, 9000 + r);
      const double theta_hat = data.mean();
      const auto s = parametric_bootstrap(theta_hat, cfg, 200, 40000 + r);
      if (s.q05 <= q_true && q_true <= s.q95) ++covered;
    }
    CHECK(covered >= 80);
  }

  CHECK_THROWS_AS(parametric_bootstrap(0.164, cfg, 0, 1), std::invalid_argument);
}
