#include "bbm/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bbm {

void validate(const ModelParams& p) {
  if (!(std::isfinite(p.beta) && p.beta > 0.0))
    throw invalid_parameter_error("beta must be finite and > 0");
  if (!(std::isfinite(p.sigma2) && p.sigma2 > 0.0))
    throw invalid_parameter_error("sigma2 must be finite and > 0");
  if (!(std::isfinite(p.alpha) && p.alpha > 0.0))
    throw invalid_parameter_error("alpha must be finite and > 0");
}

namespace {

// Threshold above which type 1 dominates the front.
double region1_threshold(double beta) {
  return beta <= 1.0 ? 1.0 / beta : beta / (2.0 * beta - 1.0);
}

// Threshold below which type 2 dominates the front.
double region2_threshold(double beta) {
  return beta <= 1.0 ? 1.0 / beta : 2.0 - beta;
}

// The anomalous wedge. Written multiplicatively so that the second
// inequality reads correctly when 2*beta - 1 <= 0.
bool in_wedge(double beta, double sigma2) {
  return sigma2 + beta > 2.0 && sigma2 * (2.0 * beta - 1.0) < beta;
}

}  // namespace

Region classify_region(const ModelParams& p) {
  validate(p);
  const double b = p.beta, s2 = p.sigma2;
  if (in_wedge(b, s2)) return b > 1.0 ? Region::III : Region::Boundary;
  if (s2 > region1_threshold(b)) return Region::I;
  if (s2 < region2_threshold(b)) return Region::II;
  return Region::Boundary;
}

double boundary_distance(const ModelParams& p) {
  const double b = p.beta, s2 = p.sigma2;
  const double inf = std::numeric_limits<double>::infinity();
  switch (classify_region(p)) {
    case Region::Boundary:
      return 0.0;
    case Region::I: {
      if (b >= 1.0) return s2 - b / (2.0 * b - 1.0);
      // beta in (1/2, 1): the wedge top beta/(2beta-1) lies above 1/beta.
      const double wedge_top = b > 0.5 ? b / (2.0 * b - 1.0) : inf;
      return std::min(s2 - 1.0 / b, wedge_top < inf ? s2 - wedge_top : inf);
    }
    case Region::II: {
      if (b > 1.0) return (2.0 - b) - s2;
      if (b == 1.0) return 1.0 - s2;
      // beta < 1: both the 1/beta threshold and the wedge bottom 2-beta bind.
      return std::min(1.0 / b - s2, (2.0 - b) - s2);
    }
    case Region::III:
      return std::min(s2 + b - 2.0, b / (2.0 * b - 1.0) - s2);
  }
  return 0.0;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::Boundary: return "Boundary";
  }
  return "?";
}

}  // namespace bbm
