#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbm/params.hpp"
#include "bbm/simulator.hpp"

namespace bbm {

class insufficient_hits_error : public std::runtime_error {
 public:
  explicit insufficient_hits_error(const std::string& what)
      : std::runtime_error(what) {}
};

struct TailEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 1.0;
  std::uint64_t n_runs = 0;
  std::uint64_t n_hits = 0;
};

struct RatePoint {
  double t;
  double threshold;
  double log_p_hat;
  TailEstimate estimate;
};

struct RateFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  std::vector<RatePoint> points;
};

// Comparison of a Monte Carlo mean against an exact first-moment target.
struct MomentReport {
  double target = 0.0;
  double empirical = 0.0;
  double stderr_mean = 0.0;
  double z = 0.0;
  bool pass = false;
  std::uint64_t n_runs = 0;
  std::uint64_t seed = 0;
};

struct LevelSetReport {
  double target = 0.0;
  double empirical = 0.0;  // mean of (1/t) ln(1 + level count)
  double stderr_mean = 0.0;
  double z = 0.0;
  bool pass = false;       // |empirical - target| <= 0.15
  std::uint64_t n_runs = 0;
  std::uint64_t seed = 0;
};

TailEstimate wilson_interval(std::uint64_t hits, std::uint64_t runs);

// P(M_t >= x) by n_runs independent two-type simulations with derived seeds.
// Aggregation is a deterministic fold in run-index order, so the result does
// not depend on the number of workers.
TailEstimate estimate_tail(const ModelParams& params, double t, double x,
                           std::uint64_t n_runs, std::uint64_t seed,
                           unsigned workers = 0);

// Least-squares slope of ln p_hat against t, thresholds at theta*v*t.
// Requires at least 10 hits at every t.
RateFit empirical_rate(const ModelParams& params, double theta,
                       const std::vector<double>& t_list, std::uint64_t n_runs,
                       std::uint64_t seed, unsigned workers = 0);

// Mean type-1 count above x versus e^{beta t} * gaussian_tail(x, sigma sqrt(t)).
MomentReport validate_first_moment_type1(const ModelParams& params, double t,
                                         double x, std::uint64_t n_runs,
                                         std::uint64_t seed,
                                         unsigned workers = 0);

// Mean type-2 count above x versus
// alpha * int_0^t e^{beta s + (t-s)} gaussian_tail(x, sqrt(sigma2 s + t - s)) ds.
MomentReport validate_first_moment_type2(const ModelParams& params, double t,
                                         double x, std::uint64_t n_runs,
                                         std::uint64_t seed,
                                         unsigned workers = 0);

// Mean of (1/t) ln(1 + #{type-1 >= sqrt(2 beta) x_frac sigma t}) versus
// (1 - x_frac^2) beta.
LevelSetReport level_set_rate(double sigma2, double beta, double x_frac,
                              double t, std::uint64_t n_runs,
                              std::uint64_t seed, unsigned workers = 0);

}  // namespace bbm
