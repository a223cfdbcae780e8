#include "bbm/ratefn.hpp"

#include <cmath>
#include <limits>

#include "bbm/numerics.hpp"

namespace bbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Region require_non_boundary(const ModelParams& p, const char* op) {
  const Region r = classify_region(p);
  if (r == Region::Boundary)
    throw boundary_region_error(std::string(op) +
                                ": (beta, sigma2) lies on a region boundary");
  return r;
}

// Coefficient c of the unified profile f(u) = (beta-1)u + 1 - c/D(u),
// D(u) = (sigma2-1)u + 1. Equals (v*theta)^2/2 for the region speed v.
double tail_coefficient(const ModelParams& p, double theta, Region r) {
  switch (r) {
    case Region::I: return p.sigma2 * p.beta * theta * theta;
    case Region::II: return theta * theta;
    case Region::III: {
      const double x = xi(p);
      return 0.5 * x * x * theta * theta;
    }
    default: throw boundary_region_error("profile: boundary region");
  }
}

double profile_value(const ModelParams& p, double c, double u) {
  const double D = (p.sigma2 - 1.0) * u + 1.0;
  return (p.beta - 1.0) * u + 1.0 - c / D;
}

std::optional<CriticalPoint> stationary_point(const ModelParams& p, double c) {
  if (p.beta == 1.0 || p.sigma2 == 1.0) return std::nullopt;
  const double ratio = c * (1.0 - p.sigma2) / (p.beta - 1.0);
  if (!(ratio > 0.0)) return std::nullopt;
  const double Dstar = std::sqrt(ratio);
  const double u0 = (Dstar - 1.0) / (p.sigma2 - 1.0);
  if (!(u0 > 0.0 && u0 < 1.0)) return std::nullopt;
  return CriticalPoint{u0, Dstar};
}

}  // namespace

double interior_closed_form(const ModelParams& p, double theta) {
  const double b = p.beta, s2 = p.sigma2;
  switch (require_non_boundary(p, "interior_closed_form")) {
    case Region::I:
      return (b - s2 -
              2.0 * std::sqrt(b * (b - 1.0) * (1.0 - s2) * s2) * theta) /
             (1.0 - s2);
    case Region::II:
      return (2.0 * std::sqrt((b - 1.0) * (1.0 - s2)) * theta + b - s2) /
             (1.0 - s2);
    default:
      return (b - s2) * (1.0 - theta) / (1.0 - s2);
  }
}

SpeedInfo speed(const ModelParams& p) {
  switch (require_non_boundary(p, "speed")) {
    case Region::I:
      return {std::sqrt(2.0 * p.sigma2 * p.beta),
              1.5 / std::sqrt(2.0 * p.beta / p.sigma2)};
    case Region::II:
      return {std::sqrt(2.0), 1.5 / std::sqrt(2.0)};
    default:
      return {xi(p), 0.0};
  }
}

double xi(const ModelParams& p) {
  if (classify_region(p) != Region::III)
    throw wrong_region_error("xi: defined only in RegionIII");
  return std::fabs(p.sigma2 - p.beta) /
         std::sqrt(2.0 * (1.0 - p.sigma2) * (p.beta - 1.0));
}

double profile(const ModelParams& p, double theta, double u) {
  const Region r = require_non_boundary(p, "profile");
  return profile_value(p, tail_coefficient(p, theta, r), u);
}

std::optional<CriticalPoint> critical_point(const ModelParams& p,
                                            double theta) {
  const Region r = require_non_boundary(p, "critical_point");
  return stationary_point(p, tail_coefficient(p, theta, r));
}

RegimeThresholds regime_thresholds(const ModelParams& p) {
  const double b = p.beta, s2 = p.sigma2;
  switch (require_non_boundary(p, "regime_thresholds")) {
    case Region::I:
      if (b <= 1.0 || s2 >= 1.0) return {kInf, kInf};  // SwitchAtEnd for all theta
      return {(b - 1.0) * s2 / ((1.0 - s2) * b),
              (b - 1.0) / ((1.0 - s2) * s2 * b)};
    case Region::II:
      if (b >= 1.0 || s2 <= 1.0) return {-kInf, -kInf};  // SwitchImmediately
      return {(1.0 - b) / (s2 - 1.0), (1.0 - b) * s2 * s2 / (s2 - 1.0)};
    default: {
      const double x2 = xi(p) * xi(p);
      const double base = 2.0 * (b - 1.0) / ((1.0 - s2) * x2);
      return {base * s2 * s2, base};
    }
  }
}

RateResult rate_at(const ModelParams& p, double theta) {
  const Region r = require_non_boundary(p, "rate");
  if (!(theta >= 1.0))
    throw theta_out_of_range_error("rate: requires theta >= 1");
  const double b = p.beta, s2 = p.sigma2;
  const double c = tail_coefficient(p, theta, r);

  // The profile is concave, so the derivative signs at the endpoints decide
  // the regime; ties go to the interior branch (value-identical there).
  const double d0 = (b - 1.0) + c * (s2 - 1.0);
  const double d1 = (b - 1.0) + c * (s2 - 1.0) / (s2 * s2);

  RateResult result{};
  if (d1 > 0.0) {
    result.regime = Regime::SwitchAtEnd;
    result.u_star = 1.0;
    result.A = b - c / s2;
  } else if (d0 < 0.0) {
    result.regime = Regime::SwitchImmediately;
    result.u_star = 0.0;
    result.A = 1.0 - c;
  } else {
    const auto cp = stationary_point(p, c);
    if (!cp) {
      // Degenerate beta==1 or sigma2==1 profiles are monotone and never
      // reach this branch; guard anyway.
      const auto m = rate_numeric(p, theta);
      result.regime = Regime::InteriorSwitch;
      result.u_star = m.x_star;
      result.A = m.f_star;
    } else {
      result.regime = Regime::InteriorSwitch;
      result.u_star = cp->u0;
      result.A = interior_closed_form(p, theta);
    }
  }

  result.numeric_check = rate_numeric(p, theta).f_star;
  if (!(std::fabs(result.A - result.numeric_check) <= 1e-6))
    throw std::logic_error("rate: closed form disagrees with numeric maximum");
  return result;
}

RateResult rate(const ModelParams& p, double theta) {
  if (!(theta > 1.0))
    throw theta_out_of_range_error("rate: requires theta > 1");
  return rate_at(p, theta);
}

MaxResult rate_numeric(const ModelParams& p, double theta, double tol) {
  const Region r = require_non_boundary(p, "rate_numeric");
  const double c = tail_coefficient(p, theta, r);
  return maximize_unimodal(
      [&](double u) { return profile_value(p, c, u); }, 0.0, 1.0, tol);
}

StrategyDescriptor optimal_strategy(const ModelParams& p, double theta) {
  const Region r = require_non_boundary(p, "optimal_strategy");
  const RateResult rr = rate_at(p, theta);
  if (rr.regime != Regime::InteriorSwitch)
    throw wrong_regime_error(
        "optimal_strategy: no interior switch at this theta");
  const double c = tail_coefficient(p, theta, r);
  const auto cp = stationary_point(p, c);
  if (!cp)
    throw wrong_regime_error("optimal_strategy: degenerate profile");
  const double v = speed(p).v;
  // x0 maximizes the two-phase exponent for fixed u0; D* = 1 - u0 + u0*sigma2.
  const double x0 = v * theta * p.sigma2 * cp->u0 / cp->Dstar;
  const double beta0 = p.beta * cp->u0 - x0 * x0 / (2.0 * p.sigma2 * cp->u0);
  return {cp->u0, x0, beta0, beta0 >= 0.0};
}

double region3_interior_alt_form(const ModelParams& p, double theta) {
  if (classify_region(p) != Region::III)
    throw wrong_region_error("region3_interior_alt_form: RegionIII only");
  const double b = p.beta, s2 = p.sigma2, sq2 = std::sqrt(2.0);
  return (sq2 * (1.0 - b) - theta * theta * (s2 - b) * (s2 - b) - 1.0) /
             (sq2 * (s2 - 1.0)) +
         1.0;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::SwitchAtEnd: return "switch_at_end";
    case Regime::SwitchImmediately: return "switch_immediately";
    case Regime::InteriorSwitch: return "interior";
  }
  return "?";
}

}  // namespace bbm
