#include <doctest.h>

#include <cmath>

#include "bbm/mc.hpp"
#include "bbm/numerics.hpp"
#include "bbm/ratefn.hpp"
#include "bbm/rng.hpp"

using namespace bbm;

TEST_CASE("wilson interval shape and calibration coverage") {
  const TailEstimate e = wilson_interval(3, 10);
  CHECK(e.p_hat == doctest::Approx(0.3));
  CHECK(e.ci_low <= e.p_hat);
  CHECK(e.p_hat <= e.ci_high);
  CHECK(e.ci_low >= 0.0);
  CHECK(e.ci_high <= 1.0);

  // Coverage on a known Bernoulli(0.3) stream: Wilson 95% should cover the
  // truth in at least 93% of 1000 repetitions.
  const double p = 0.3;
  int covered = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    RngStream rng = RngStream::root(rng::derive_run_seed(99, rep));
    std::uint64_t hits = 0;
    const std::uint64_t n = 200;
    for (std::uint64_t i = 0; i < n; ++i)
      if (rng.u01() <= p) ++hits;
    const TailEstimate ci = wilson_interval(hits, n);
    if (ci.ci_low <= p && p <= ci.ci_high) ++covered;
  }
  CHECK(covered >= 930);
}

TEST_CASE("estimate_tail hits everything below any reachable position") {
  const TailEstimate e =
      estimate_tail({1.0, 1.0, 1.0}, 1.0, -1e6, 100, 5, 1);
  CHECK(e.p_hat == 1.0);
  CHECK(e.n_hits == 100);
  CHECK_THROWS_AS(estimate_tail({1.0, 1.0, 1.0}, 1.0, 0.0, 0, 5, 1),
                  invalid_parameter_error);
}

TEST_CASE("estimate_tail is deterministic and worker-count independent") {
  const ModelParams p{1.0, 2.0, 1.0};
  const TailEstimate a = estimate_tail(p, 3.0, 6.0, 400, 17, 1);
  const TailEstimate b = estimate_tail(p, 3.0, 6.0, 400, 17, 3);
  const TailEstimate c = estimate_tail(p, 3.0, 6.0, 400, 17, 3);
  CHECK(a.n_hits == b.n_hits);
  CHECK(b.n_hits == c.n_hits);
  CHECK(a.p_hat == b.p_hat);
}

TEST_CASE("markov consistency: a hit implies a particle above the level") {
  const ModelParams p{1.0, 1.0, 1.0};
  const double x = 2.0, t = 2.0;
  std::uint64_t hits = 0, count_lower = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    SimConfig cfg;
    cfg.t_end = t;
    cfg.seed = rng::derive_run_seed(23, i);
    cfg.level_thresholds = {x};
    const SimResult r = simulate_two_type(p, cfg);
    const bool hit = r.m_global >= x;
    const std::uint64_t above =
        r.level_counts[0] + ((r.m_type2 && *r.m_type2 >= x) ? 1 : 0);
    if (hit) {
      ++hits;
      REQUIRE(above >= 1);
    }
    count_lower += above;
  }
  CHECK(hits <= count_lower);
}

TEST_CASE("validate_first_moment_type1 matches e^{beta t} tail targets") {
  const auto r = validate_first_moment_type1({1.0, 1.0, 1.0}, 1.0, 0.0, 4000,
                                             314, 1);
  CHECK(r.target == doctest::Approx(std::exp(1.0) * 0.5).epsilon(1e-12));
  CHECK(r.pass);

  const auto deg = validate_first_moment_type1({1.0, 1.0, 1.0}, 0.0, 0.0, 200,
                                               314, 1);
  CHECK(deg.target == 1.0);
  CHECK(deg.empirical == 1.0);
  CHECK(deg.z == 0.0);
  CHECK(deg.pass);

  const double t2 = std::exp(4.0) * gaussian_tail(2.0, std::sqrt(1.6));
  const auto far = validate_first_moment_type1({2.0, 0.8, 1.0}, 2.0, 2.0, 4000,
                                               314, 1);
  CHECK(far.target == doctest::Approx(t2).epsilon(1e-12));
  CHECK(far.target == doctest::Approx(3.1076).epsilon(1e-3));
  CHECK(far.pass);
}

TEST_CASE("validate_first_moment_type2 matches the emission integral") {
  const double closed = std::exp(2.0) - std::exp(1.0);
  const auto all = validate_first_moment_type2({2.0, 0.8, 1.0}, 1.0, -1e6,
                                               4000, 27, 1);
  CHECK(all.target == doctest::Approx(closed).epsilon(1e-9));
  CHECK(all.pass);

  const auto half = validate_first_moment_type2({2.0, 0.8, 1.0}, 1.0, 0.0,
                                                4000, 27, 1);
  CHECK(half.target == doctest::Approx(0.5 * closed).epsilon(1e-9));
  CHECK(half.pass);

  const auto none = validate_first_moment_type2({2.0, 0.8, 0.0}, 1.0, 0.0, 200,
                                                27, 1);
  CHECK(none.target == 0.0);
  CHECK(none.empirical == 0.0);
  CHECK(none.pass);
}

TEST_CASE("level_set_rate approaches (1 - x^2) beta") {
  const auto r = level_set_rate(1.0, 1.0, 0.5, 6.0, 300, 63, 1);
  CHECK(r.target == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::fabs(r.empirical - r.target) <= 0.15);

  // The target is sigma2-free because the threshold scales with sigma.
  const auto scaled = level_set_rate(2.0, 1.0, 0.5, 6.0, 300, 63, 1);
  CHECK(scaled.target == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::fabs(scaled.empirical - scaled.target) <= 0.15);

  CHECK_THROWS_AS(level_set_rate(1.0, 1.0, 1.5, 6.0, 100, 1, 1),
                  invalid_parameter_error);
}

TEST_CASE("empirical_rate fits a negative, decreasing trend") {
  const ModelParams p{1.0, 2.0, 1.0};
  const RateFit fit = empirical_rate(p, 1.05, {2.0, 3.0, 4.0}, 4000, 11, 1);
  REQUIRE(fit.points.size() == 3);
  CHECK(fit.slope < 0.0);
  CHECK(fit.points[0].log_p_hat > fit.points[1].log_p_hat);
  CHECK(fit.points[1].log_p_hat > fit.points[2].log_p_hat);
  for (const auto& pt : fit.points) CHECK(pt.estimate.n_hits >= 10);

  const RateFit again = empirical_rate(p, 1.05, {2.0, 3.0, 4.0}, 4000, 11, 3);
  CHECK(fit.slope == again.slope);  // worker-count independent

  CHECK_THROWS_AS(empirical_rate(p, 1.05, {3.0}, 100, 1, 1),
                  invalid_parameter_error);
  CHECK_THROWS_AS(empirical_rate(p, 1.05, {3.0, 2.0}, 100, 1, 1),
                  invalid_parameter_error);
}

TEST_CASE("empirical_rate raises insufficient-hits when the event is too "
          "rare") {
  // A = beta (1 - theta^2) = -5.25 at theta = 2.5: hopeless at these sizes.
  const ModelParams p{1.0, 2.0, 1.0};
  CHECK_THROWS_AS(empirical_rate(p, 2.5, {2.0, 3.0}, 2000, 13, 1),
                  insufficient_hits_error);
}
