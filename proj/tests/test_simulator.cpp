#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bbm/rng.hpp"
#include "bbm/simulator.hpp"

using namespace bbm;

namespace {

SimConfig config_at(double t, std::uint64_t seed) {
  SimConfig cfg;
  cfg.t_end = t;
  cfg.seed = seed;
  return cfg;
}

// Anderson-Darling statistic for a fully specified exponential(rate) law.
double anderson_darling_exponential(std::vector<double> xs, double rate) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = -std::expm1(-rate * xs[i]);            // F(x_(i))
    const double hi = std::exp(-rate * xs[n - 1 - i]);       // 1 - F(x_(n-1-i))
    acc += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  return -static_cast<double>(n) - acc / static_cast<double>(n);
}

}  // namespace

TEST_CASE("t_end = 0 reports the initial condition") {
  const SimResult r = simulate_two_type({1.0, 2.0, 1.0}, config_at(0.0, 42));
  CHECK(r.m_global == 0.0);
  CHECK(r.n_type1 == 1);
  CHECK(r.n_type2 == 0);
  REQUIRE(r.m_type1.has_value());
  CHECK_FALSE(r.m_type2.has_value());

  SimConfig cfg = config_at(0.0, 43);
  cfg.level_thresholds = {-1.0, 0.0, 1.0};
  const SimResult lv = simulate_single(1.0, 1.0, cfg);
  REQUIRE(lv.level_counts.size() == 3);
  CHECK(lv.level_counts[0] == 1);
  CHECK(lv.level_counts[1] == 1);
  CHECK(lv.level_counts[2] == 0);
}

TEST_CASE("identical configs give bit-identical results") {
  const ModelParams p{1.5, 0.8, 0.7};
  for (std::uint64_t seed : {1ULL, 999ULL, 123456789ULL}) {
    const SimResult a = simulate_two_type(p, config_at(3.0, seed));
    const SimResult b = simulate_two_type(p, config_at(3.0, seed));
    CHECK(a.m_global == b.m_global);
    CHECK(a.m_type1 == b.m_type1);
    CHECK(a.m_type2 == b.m_type2);
    CHECK(a.n_type1 == b.n_type1);
    CHECK(a.n_type2 == b.n_type2);
  }
}

TEST_CASE("alpha = 0 never produces type-2 particles") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SimResult r = simulate_two_type({1.0, 2.0, 0.0}, config_at(3.0, seed));
    CHECK(r.n_type2 == 0);
    CHECK_FALSE(r.m_type2.has_value());
  }
}

TEST_CASE("Brownian scaling: sigma2 = 4 doubles every position pathwise") {
  // Same seed means the same tree and the same standard normals, so the
  // (4, 1) run is exactly the (1, 1) run scaled by 2. This is stronger than
  // the distributional (Kolmogorov-Smirnov) statement.
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const SimResult narrow = simulate_single(1.0, 1.0, config_at(2.0, seed));
    const SimResult wide = simulate_single(4.0, 1.0, config_at(2.0, seed));
    CHECK(wide.n_type1 == narrow.n_type1);
    CHECK(wide.m_global == doctest::Approx(2.0 * narrow.m_global).epsilon(1e-12));
  }
}

TEST_CASE("advancing a saved state matches a fresh longer run") {
  const ModelParams p{1.0, 1.0, 1.0};
  const SimConfig cfg = config_at(2.0, 0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SimState staged = initial_state(seed);
    advance(staged, p, 1.0, cfg);
    const SimResult mid = observe(staged, p, cfg);  // observing must not disturb
    (void)mid;
    advance(staged, p, 2.0, cfg);
    const SimResult resumed = observe(staged, p, cfg);

    const SimResult direct = simulate_two_type(p, config_at(2.0, seed));
    CHECK(resumed.m_global == direct.m_global);
    CHECK(resumed.m_type1 == direct.m_type1);
    CHECK(resumed.m_type2 == direct.m_type2);
    CHECK(resumed.n_type1 == direct.n_type1);
    CHECK(resumed.n_type2 == direct.n_type2);
  }
}

TEST_CASE("mean population matches e^{beta t}") {
  // Many-to-one with f == 1 at (sigma2=1, beta=1), t=6.
  const double t = 6.0;
  const int runs = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < runs; ++i) {
    const SimResult r = simulate_single(
        1.0, 1.0, config_at(t, rng::derive_run_seed(2025, i)));
    const double n = static_cast<double>(r.n_type1);
    sum += n;
    sumsq += n * n;
  }
  const double mean = sum / runs;
  const double se = std::sqrt((sumsq / runs - mean * mean) / (runs - 1));
  const double target = std::exp(t);
  CHECK(std::fabs(mean - target) <= 3.0 * se);
}

TEST_CASE("first event time is the documented stream draw and is "
          "exponential") {
  const double beta = 2.0, alpha = 1.0;
  // Engine consistency: the first event of the root is the first
  // exponential(beta+alpha) draw of the root stream.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream probe = RngStream::root(seed);
    const double first = probe.exponential(beta + alpha);
    const ModelParams p{beta, 1.0, alpha};
    const SimResult before =
        simulate_two_type(p, config_at(first * (1.0 - 1e-9), seed));
    CHECK(before.n_type1 == 1);
    CHECK(before.n_type2 == 0);
    const SimResult after =
        simulate_two_type(p, config_at(first * (1.0 + 1e-9), seed));
    CHECK(after.n_type1 + after.n_type2 == 2);
  }

  // Anderson-Darling at the 1% level on 10^4 inter-event samples.
  std::vector<double> samples;
  samples.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    RngStream s = RngStream::root(rng::derive_run_seed(7, i));
    samples.push_back(s.exponential(beta));
  }
  CHECK(anderson_darling_exponential(std::move(samples), beta) < 3.857);
}

TEST_CASE("population cap raises an overflow error") {
  SimConfig cfg = config_at(6.0, 11);
  cfg.max_population = 16;
  CHECK_THROWS_AS(simulate_single(1.0, 3.0, cfg), population_overflow_error);
}

TEST_CASE("pruned runs keep the threshold indicator exact") {
  const ModelParams p{1.0, 2.0, 1.0};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SimConfig exact = config_at(3.0, seed);
    const SimResult full = simulate_two_type(p, exact);
    SimConfig pruned = exact;
    const double threshold = 5.0;
    pruned.prune_threshold = threshold;
    const SimResult cut = simulate_two_type(p, pruned);
    CHECK((full.m_global >= threshold) == (cut.m_global >= threshold));
    CHECK(full.n_type1 == cut.n_type1);  // type 1 is never pruned
    CHECK(full.m_type1 == cut.m_type1);
  }
}
