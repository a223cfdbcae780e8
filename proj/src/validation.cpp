#include "bbm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bbm/numerics.hpp"
#include "bbm/ratefn.hpp"

namespace bbm {

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

}  // namespace

ModelParams sample_in_region(RngStream& rng, Region target) {
  for (;;) {
    ModelParams p{3.0 * rng.u01(), 3.0 * rng.u01(), 1.0};
    if (classify_region(p) == target) return p;
  }
}

ModelParams sample_three_phase(RngStream& rng, Region target) {
  for (;;) {
    ModelParams p = sample_in_region(rng, target);
    const RegimeThresholds w = regime_thresholds(p);
    if (std::isfinite(w.theta2_low) && std::isfinite(w.theta2_high) &&
        w.theta2_high > w.theta2_low)
      return p;
  }
}

double sample_interior_theta(RngStream& rng, const ModelParams& p) {
  const RegimeThresholds w = regime_thresholds(p);
  const double lo = std::max(w.theta2_low, 1.0);
  const double theta2 = lo + (0.05 + 0.9 * rng.u01()) * (w.theta2_high - lo);
  return std::sqrt(theta2);
}

namespace {

CheckResult closed_form_vs_oracle(std::uint64_t seed) {
  RngStream rng = RngStream::root(seed ^ 0x11);
  double max_gap = 0.0;
  for (Region region : {Region::I, Region::II, Region::III}) {
    for (int i = 0; i < 1000; ++i) {
      const ModelParams p = sample_in_region(rng, region);
      const double theta = 1.0 + 2.0 * rng.u01();
      const RateResult r = rate(p, theta);
      max_gap = std::max(max_gap, std::fabs(r.A - r.numeric_check));
    }
  }
  return {"closed_form_vs_oracle", max_gap <= 1e-6,
          fmt("max |A - grid max| = %.3g over 3x1000 samples", max_gap)};
}

CheckResult threshold_continuity(std::uint64_t seed) {
  RngStream rng = RngStream::root(seed ^ 0x22);
  double max_gap = 0.0;
  for (Region region : {Region::I, Region::II, Region::III}) {
    for (int i = 0; i < 100; ++i) {
      const ModelParams p = sample_three_phase(rng, region);
      const RegimeThresholds w = regime_thresholds(p);
      const double theta_low = std::sqrt(w.theta2_low);
      const double theta_high = std::sqrt(w.theta2_high);
      const double k = region == Region::I    ? p.sigma2 * p.beta
                       : region == Region::II ? 1.0
                                              : 0.5 * xi(p) * xi(p);
      const double c_low = k * w.theta2_low;
      const double c_high = k * w.theta2_high;
      // RegionI/III: u=1 endpoint below the window, u=0 above.
      // RegionII: the orientation is reversed.
      const double end_low = region == Region::II ? 1.0 - c_low
                                                  : p.beta - c_low / p.sigma2;
      const double end_high = region == Region::II
                                  ? p.beta - c_high / p.sigma2
                                  : 1.0 - c_high;
      max_gap = std::max(
          max_gap, std::fabs(end_low - interior_closed_form(p, theta_low)));
      max_gap = std::max(
          max_gap, std::fabs(end_high - interior_closed_form(p, theta_high)));
    }
  }
  return {"threshold_continuity", max_gap <= 1e-9,
          fmt("max closed-form mismatch at thresholds = %.3g", max_gap)};
}

CheckResult zero_at_unity(std::uint64_t seed) {
  RngStream rng = RngStream::root(seed ^ 0x33);
  double worst = 0.0;
  for (Region region : {Region::I, Region::II, Region::III}) {
    for (int i = 0; i < 100; ++i) {
      const ModelParams p = sample_in_region(rng, region);
      worst = std::max(worst, std::fabs(rate_at(p, 1.0).A));
    }
  }
  return {"zero_at_unity", worst <= 1e-9,
          fmt("max |A(1)| = %.3g over 3x100 samples", worst)};
}

CheckResult strategy_identity(std::uint64_t seed) {
  RngStream rng = RngStream::root(seed ^ 0x44);
  double max_gap = 0.0;
  for (Region region : {Region::I, Region::II, Region::III}) {
    for (int i = 0; i < 100; ++i) {
      const ModelParams p = sample_three_phase(rng, region);
      const double theta = sample_interior_theta(rng, p);
      const StrategyDescriptor s = optimal_strategy(p, theta);
      const double v = speed(p).v;
      const double one_minus_u = 1.0 - s.u_star;
      const double reach = v * theta - s.x0;
      const double chain =
          s.beta0 +
          (1.0 - reach * reach / (2.0 * one_minus_u * one_minus_u)) *
              one_minus_u;
      max_gap = std::max(
          max_gap, std::fabs(chain - profile(p, theta, s.u_star)));
    }
  }
  return {"strategy_identity", max_gap <= 1e-9,
          fmt("max |exponent chain - f(u0)| = %.3g", max_gap)};
}

CheckResult classifier_metamorphic(std::uint64_t seed) {
  RngStream rng = RngStream::root(seed ^ 0x55);
  int mismatches = 0, exclusivity_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const double b = 3.0 * rng.u01();
    const double s2 = 3.0 * rng.u01();
    const ModelParams p{b, s2, 1.0};
    // Direct re-evaluation of the region inequalities.
    const double thr1 = b <= 1.0 ? 1.0 / b : b / (2.0 * b - 1.0);
    const double thr2 = b <= 1.0 ? 1.0 / b : 2.0 - b;
    const bool wedge = s2 + b > 2.0 && s2 * (2.0 * b - 1.0) < b;
    Region expected;
    if (wedge)
      expected = b > 1.0 ? Region::III : Region::Boundary;
    else if (s2 > thr1)
      expected = Region::I;
    else if (s2 < thr2)
      expected = Region::II;
    else
      expected = Region::Boundary;
    if (classify_region(p) != expected) ++mismatches;

    const bool p1 = s2 > thr1 && !wedge;
    const bool p2 = s2 < thr2 && !wedge;
    const bool p3 = wedge && b > 1.0;
    if (static_cast<int>(p1) + static_cast<int>(p2) + static_cast<int>(p3) > 1)
      ++exclusivity_failures;
  }
  return {"classifier_metamorphic",
          mismatches == 0 && exclusivity_failures == 0,
          fmt("mismatches=%.0f exclusivity_failures=%.0f",
              static_cast<double>(mismatches),
              static_cast<double>(exclusivity_failures))};
}

}  // namespace

std::vector<CheckResult> consistency_checks(std::uint64_t seed) {
  return {closed_form_vs_oracle(seed), threshold_continuity(seed),
          zero_at_unity(seed), strategy_identity(seed),
          classifier_metamorphic(seed)};
}

}  // namespace bbm
