#include "bbm/mc.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "bbm/numerics.hpp"
#include "bbm/ratefn.hpp"
#include "bbm/rng.hpp"

namespace bbm {

namespace {

constexpr double kZ95 = 1.959963984540054;

unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : std::min(hc, 8u);
}

// Runs fn(i) for i in [0, n) on a worker pool, collecting results by index.
// The fold order is fixed by index, so output is identical for any worker
// count.
template <typename T>
std::vector<T> run_indexed(std::uint64_t n, unsigned workers,
                           const std::function<T(std::uint64_t)>& fn) {
  std::vector<T> results(n);
  workers = resolve_workers(workers);
  if (workers <= 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return results;
}

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stderr(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (static_cast<double>(xs.size() - 1) *
                         static_cast<double>(xs.size())));
}

MomentReport moment_report(const std::vector<double>& counts, double target,
                           std::uint64_t n_runs, std::uint64_t seed) {
  MomentReport r;
  r.target = target;
  r.empirical = sample_mean(counts);
  r.stderr_mean = sample_stderr(counts, r.empirical);
  r.z = r.stderr_mean > 0.0 ? (r.empirical - target) / r.stderr_mean
                            : (r.empirical == target ? 0.0 : INFINITY);
  r.pass = std::fabs(r.z) <= 3.0;
  r.n_runs = n_runs;
  r.seed = seed;
  return r;
}

}  // namespace

TailEstimate wilson_interval(std::uint64_t hits, std::uint64_t runs) {
  TailEstimate e;
  e.n_runs = runs;
  e.n_hits = hits;
  if (runs == 0) return e;
  const double n = static_cast<double>(runs);
  const double p = static_cast<double>(hits) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 / denom *
                      std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  e.p_hat = p;
  e.ci_low = std::max(0.0, center - half);
  e.ci_high = std::min(1.0, center + half);
  return e;
}

TailEstimate estimate_tail(const ModelParams& params, double t, double x,
                           std::uint64_t n_runs, std::uint64_t seed,
                           unsigned workers) {
  if (n_runs < 1)
    throw invalid_parameter_error("estimate_tail: n_runs must be >= 1");
  std::function<char(std::uint64_t)> one_run = [&](std::uint64_t i) -> char {
    SimConfig cfg;
    cfg.t_end = t;
    cfg.seed = rng::derive_run_seed(seed, i);
    cfg.prune_threshold = x;  // only the hit indicator is requested
    try {
      return simulate_two_type(params, cfg).m_global >= x ? 1 : 0;
    } catch (const population_overflow_error& e) {
      throw population_overflow_error(std::string(e.what()) + " in run " +
                                      std::to_string(i));
    }
  };
  const std::vector<char> hits = run_indexed(n_runs, workers, one_run);
  std::uint64_t n_hits = 0;
  for (char h : hits) n_hits += h;
  return wilson_interval(n_hits, n_runs);
}

RateFit empirical_rate(const ModelParams& params, double theta,
                       const std::vector<double>& t_list, std::uint64_t n_runs,
                       std::uint64_t seed, unsigned workers) {
  if (t_list.size() < 2)
    throw invalid_parameter_error("empirical_rate: need at least 2 times");
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i - 1]))
      throw invalid_parameter_error(
          "empirical_rate: t_list must be strictly increasing");

  const double v = speed(params).v;
  RateFit fit;
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    const double t = t_list[k];
    const double x = theta * v * t;
    const std::uint64_t batch_seed = rng::mix(seed ^ (0xC0FFEEULL + k));
    const TailEstimate e = estimate_tail(params, t, x, n_runs, batch_seed,
                                         workers);
    if (e.n_hits < 10)
      throw insufficient_hits_error(
          "empirical_rate: only " + std::to_string(e.n_hits) + " hits at t=" +
          std::to_string(t) + " (need >= 10)");
    fit.points.push_back({t, x, std::log(e.p_hat), e});
  }

  // Weighted by delta-method variances from the Wilson widths.
  double tbar = 0.0;
  for (const auto& pt : fit.points) tbar += pt.t;
  tbar /= static_cast<double>(fit.points.size());
  double sxx = 0.0, sxy = 0.0, var_acc = 0.0;
  for (const auto& pt : fit.points) {
    const double dt = pt.t - tbar;
    sxx += dt * dt;
    sxy += dt * pt.log_p_hat;
    const double se_p = (pt.estimate.ci_high - pt.estimate.ci_low) / (2.0 * kZ95);
    const double se_log = se_p / pt.estimate.p_hat;
    var_acc += dt * dt * se_log * se_log;
  }
  fit.slope = sxy / sxx;
  fit.stderr_slope = std::sqrt(var_acc) / sxx;
  return fit;
}

MomentReport validate_first_moment_type1(const ModelParams& params, double t,
                                         double x, std::uint64_t n_runs,
                                         std::uint64_t seed, unsigned workers) {
  if (n_runs < 100)
    throw invalid_parameter_error("validate_first_moment_type1: n_runs >= 100");
  double target;
  if (t == 0.0) {
    target = x <= 0.0 ? 1.0 : 0.0;  // one particle at the origin
  } else {
    target = std::exp(params.beta * t) *
             gaussian_tail(x, std::sqrt(params.sigma2 * t));
  }
  std::function<double(std::uint64_t)> one_run = [&](std::uint64_t i) {
    SimConfig cfg;
    cfg.t_end = t;
    cfg.seed = rng::derive_run_seed(seed, i);
    cfg.level_thresholds = {x};
    return static_cast<double>(
        simulate_two_type(params, cfg).level_counts[0]);
  };
  const auto counts = run_indexed(n_runs, workers, one_run);
  return moment_report(counts, target, n_runs, seed);
}

MomentReport validate_first_moment_type2(const ModelParams& params, double t,
                                         double x, std::uint64_t n_runs,
                                         std::uint64_t seed, unsigned workers) {
  if (n_runs < 100)
    throw invalid_parameter_error("validate_first_moment_type2: n_runs >= 100");
  double target = 0.0;
  if (t > 0.0 && params.alpha > 0.0) {
    const auto integrand = [&](double s) {
      const double var = params.sigma2 * s + (t - s);
      return std::exp(params.beta * s + (t - s)) *
             gaussian_tail(x, std::sqrt(var));
    };
    QuadratureSpec spec;
    spec.abs_tol = 1e-10 * std::max(1.0, std::exp(std::max(params.beta, 1.0) * t));
    target = params.alpha * integrate(integrand, 0.0, t, spec);
  }
  std::function<double(std::uint64_t)> one_run = [&](std::uint64_t i) {
    SimConfig cfg;
    cfg.t_end = t;
    cfg.seed = rng::derive_run_seed(seed, i);
    SimState state = initial_state(cfg.seed);
    advance(state, params, t, cfg);
    // Count type-2 particles at or above x directly from the snapshot,
    // using the same observation draws observe() would use.
    std::uint64_t count = 0;
    for (const Particle& p : state.particles) {
      if (p.kind != ParticleKind::Type2) continue;
      const double dt = t - p.clock_origin;
      double pos = p.position;
      if (dt > 0.0) {
        RngStream obs = p.stream.observer();
        pos += obs.normal() * std::sqrt(dt);
      }
      if (pos >= x) ++count;
    }
    return static_cast<double>(count);
  };
  const auto counts = run_indexed(n_runs, workers, one_run);
  return moment_report(counts, target, n_runs, seed);
}

LevelSetReport level_set_rate(double sigma2, double beta, double x_frac,
                              double t, std::uint64_t n_runs,
                              std::uint64_t seed, unsigned workers) {
  if (!(x_frac > 0.0 && x_frac < 1.0))
    throw invalid_parameter_error("level_set_rate: x_frac must be in (0,1)");
  if (!(t > 0.0)) throw invalid_parameter_error("level_set_rate: t must be > 0");
  const double threshold = std::sqrt(2.0 * beta) * x_frac * std::sqrt(sigma2) * t;
  std::function<double(std::uint64_t)> one_run = [&](std::uint64_t i) {
    SimConfig cfg;
    cfg.t_end = t;
    cfg.seed = rng::derive_run_seed(seed, i);
    cfg.level_thresholds = {threshold};
    const SimResult res = simulate_single(sigma2, beta, cfg);
    return std::log1p(static_cast<double>(res.level_counts[0])) / t;
  };
  const auto values = run_indexed(n_runs, workers, one_run);
  LevelSetReport r;
  r.target = (1.0 - x_frac * x_frac) * beta;
  r.empirical = sample_mean(values);
  r.stderr_mean = sample_stderr(values, r.empirical);
  r.z = r.stderr_mean > 0.0 ? (r.empirical - r.target) / r.stderr_mean : 0.0;
  r.pass = std::fabs(r.empirical - r.target) <= 0.15;
  r.n_runs = n_runs;
  r.seed = seed;
  return r;
}

}  // namespace bbm
