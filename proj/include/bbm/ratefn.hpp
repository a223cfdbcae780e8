#pragma once

#include <optional>

#include "bbm/params.hpp"

namespace bbm {

class boundary_region_error : public std::runtime_error {
 public:
  explicit boundary_region_error(const std::string& what)
      : std::runtime_error(what) {}
};

class wrong_region_error : public std::runtime_error {
 public:
  explicit wrong_region_error(const std::string& what)
      : std::runtime_error(what) {}
};

class wrong_regime_error : public std::runtime_error {
 public:
  explicit wrong_regime_error(const std::string& what)
      : std::runtime_error(what) {}
};

class theta_out_of_range_error : public std::invalid_argument {
 public:
  explicit theta_out_of_range_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// Leading-order growth of the median maximum: m_t = v*t - log_correction*ln t.
struct SpeedInfo {
  double v;
  double log_correction;  // 0 in RegionIII
};

// Where the profile f(u) attains its maximum over u in [0,1]:
//   SwitchAtEnd       argmax u = 1 (stay type 1 the whole time)
//   SwitchImmediately argmax u = 0 (switch to type 2 at once)
//   InteriorSwitch    argmax at the interior stationary point u0
enum class Regime { SwitchAtEnd, SwitchImmediately, InteriorSwitch };

struct RateResult {
  double A;              // exponential decay rate, <= 0 for theta >= 1
  Regime regime;
  double u_star;         // 1, 0, or u0
  double numeric_check;  // golden-section maximum of the profile
};

// Lower-bound switching recipe: spend fraction u_star as type 1, reach
// level x0*t by then with population exponent beta0, finish as type 2.
struct StrategyDescriptor {
  double u_star;
  double x0;
  double beta0;
  bool beta0_nonnegative;  // the switch population grows only if beta0 >= 0
};

struct CriticalPoint {
  double u0;
  double Dstar;  // (sigma2-1)*u0 + 1
};

// theta^2 thresholds separating the three phases. +inf/+inf means
// SwitchAtEnd for every theta; -inf/-inf means SwitchImmediately for every
// theta. Orientation: RegionI and RegionIII are SwitchAtEnd below theta2_low
// and SwitchImmediately above theta2_high; RegionII is the reverse.
struct RegimeThresholds {
  double theta2_low;
  double theta2_high;
};

SpeedInfo speed(const ModelParams& p);

// Anomalous spreading speed (RegionIII only): |sigma2-beta| / sqrt(2(1-sigma2)(beta-1)).
double xi(const ModelParams& p);

// The switching profile f(u) = (beta-1)u + 1 - c/((sigma2-1)u + 1) with
// c = sigma2*beta*theta^2 (RegionI), theta^2 (RegionII), xi^2*theta^2/2 (RegionIII).
double profile(const ModelParams& p, double theta, double u);

// Interior stationary point of the region profile, when one exists in (0,1).
std::optional<CriticalPoint> critical_point(const ModelParams& p, double theta);

RegimeThresholds regime_thresholds(const ModelParams& p);

// Closed-form rate A(theta) = max_u f(u), with regime dispatch and a
// golden-section cross-check. Valid for theta >= 1.
RateResult rate_at(const ModelParams& p, double theta);

// Same, but enforcing the theta > 1 precondition of the large-deviation limit.
RateResult rate(const ModelParams& p, double theta);

// Maximizer and maximum of the region profile over [0,1] by golden-section
// search (the profile is strictly concave in u whenever sigma2 != 1).
MaxResult rate_numeric(const ModelParams& p, double theta, double tol = 1e-10);

// Optimal switching recipe (u0, x0, beta0) for the interior regime.
StrategyDescriptor optimal_strategy(const ModelParams& p, double theta);

// The interior-branch closed form f(u0) as an algebraic expression in
// (beta, sigma2, theta); defined for any theta, which makes it usable for
// continuity checks at the regime thresholds where u0 hits an endpoint.
double interior_closed_form(const ModelParams& p, double theta);

// The other published closed form for the RegionIII interior rate. It does
// not match the profile maximum (rate() uses the verified simplification);
// exposed so the CLI can report the discrepancy.
double region3_interior_alt_form(const ModelParams& p, double theta);

const char* regime_name(Regime r);

}  // namespace bbm
