#include "bbm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbm/numerics.hpp"

namespace bbm {

namespace {

constexpr double kUndrawn = -1.0;

void check_sim_params(const ModelParams& p) {
  if (!(std::isfinite(p.beta) && p.beta > 0.0))
    throw invalid_parameter_error("simulate: beta must be finite and > 0");
  if (!(std::isfinite(p.sigma2) && p.sigma2 > 0.0))
    throw invalid_parameter_error("simulate: sigma2 must be finite and > 0");
  if (!(std::isfinite(p.alpha) && p.alpha >= 0.0))
    throw invalid_parameter_error("simulate: alpha must be finite and >= 0");
}

double event_rate(const ModelParams& p, ParticleKind k) {
  return k == ParticleKind::Type1 ? p.beta + p.alpha : 1.0;
}

double variance_rate(const ModelParams& p, ParticleKind k) {
  return k == ParticleKind::Type1 ? p.sigma2 : 1.0;
}

// Expected number of descendants of a type-2 particle at `position` that sit
// above `threshold` after the remaining time; used as a branch-and-bound
// certificate when only the threshold indicator is requested.
bool type2_subtree_matters(double position, double remaining, double threshold,
                           double epsilon) {
  if (position >= threshold || remaining <= 0.0) return true;
  const double log_expected =
      remaining + log_gaussian_tail(threshold - position, std::sqrt(remaining));
  return log_expected >= std::log(epsilon);
}

}  // namespace

SimState initial_state(std::uint64_t seed) {
  SimState state;
  state.time = 0.0;
  state.particles.push_back(Particle{ParticleKind::Type1, 0.0, 0.0, kUndrawn,
                                     RngStream::root(seed)});
  return state;
}

void advance(SimState& state, const ModelParams& params, double horizon,
             const SimConfig& config) {
  check_sim_params(params);
  if (horizon < state.time)
    throw std::domain_error("advance: horizon before current state time");

  std::vector<Particle> done;
  std::vector<Particle> pending(std::move(state.particles));
  done.reserve(pending.size());
  const double branch_fraction = params.beta / (params.beta + params.alpha);

  auto cap_check = [&](std::size_t in_hand) {
    if (done.size() + pending.size() + in_hand > config.max_population)
      throw population_overflow_error(
          "advance: population cap " + std::to_string(config.max_population) +
          " exceeded (seed " + std::to_string(config.seed) + ")");
  };

  while (!pending.empty()) {
    Particle cur = pending.back();
    pending.pop_back();
    bool alive = true;
    while (alive) {
      if (cur.next_event == kUndrawn)
        cur.next_event =
            cur.clock_origin +
            cur.stream.exponential(event_rate(params, cur.kind));
      if (cur.next_event > horizon) {
        done.push_back(cur);
        cap_check(0);
        break;
      }
      const double dt = cur.next_event - cur.clock_origin;
      if (dt > 0.0)
        cur.position +=
            cur.stream.normal() * std::sqrt(variance_rate(params, cur.kind) * dt);
      cur.clock_origin = cur.next_event;
      cur.next_event = kUndrawn;

      if (cur.kind == ParticleKind::Type1 &&
          cur.stream.u01() > branch_fraction) {
        // Emission: one type-2 founder; the parent keeps evolving.
        Particle founder{ParticleKind::Type2, cur.position, cur.clock_origin,
                         kUndrawn, cur.stream.spawn()};
        if (!config.prune_threshold ||
            type2_subtree_matters(founder.position,
                                  horizon - founder.clock_origin,
                                  *config.prune_threshold,
                                  config.prune_epsilon)) {
          pending.push_back(founder);
          cap_check(1);
        }
        continue;
      }

      // Binary branching: the particle dies and two children start here.
      RngStream first = cur.stream.spawn();
      RngStream second = cur.stream.spawn();
      if (cur.kind == ParticleKind::Type2 && config.prune_threshold &&
          !type2_subtree_matters(cur.position, horizon - cur.clock_origin,
                                 *config.prune_threshold,
                                 config.prune_epsilon)) {
        alive = false;  // neither child's subtree can matter
        continue;
      }
      Particle sibling = cur;
      sibling.stream = second;
      pending.push_back(sibling);
      cap_check(1);
      cur.stream = first;
    }
  }

  state.particles = std::move(done);
  state.time = horizon;
}

SimResult observe(const SimState& state, const ModelParams& params,
                  const SimConfig& config) {
  check_sim_params(params);
  SimResult result;
  result.level_counts.assign(config.level_thresholds.size(), 0);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double m1 = neg_inf, m2 = neg_inf;

  for (const Particle& p : state.particles) {
    const double dt = state.time - p.clock_origin;
    double pos = p.position;
    if (dt > 0.0) {
      RngStream obs = p.stream.observer();
      pos += obs.normal() * std::sqrt(variance_rate(params, p.kind) * dt);
    }
    if (p.kind == ParticleKind::Type1) {
      ++result.n_type1;
      m1 = std::max(m1, pos);
      for (std::size_t i = 0; i < config.level_thresholds.size(); ++i)
        if (pos >= config.level_thresholds[i]) ++result.level_counts[i];
    } else {
      ++result.n_type2;
      m2 = std::max(m2, pos);
    }
  }

  if (result.n_type1 > 0) result.m_type1 = m1;
  if (result.n_type2 > 0) result.m_type2 = m2;
  result.m_global = std::max(result.m_type1.value_or(neg_inf),
                             result.m_type2.value_or(neg_inf));
  return result;
}

SimResult simulate_two_type(const ModelParams& params, const SimConfig& config) {
  if (!(std::isfinite(config.t_end) && config.t_end >= 0.0))
    throw std::domain_error("simulate: t_end must be finite and >= 0");
  SimState state = initial_state(config.seed);
  advance(state, params, config.t_end, config);
  return observe(state, params, config);
}

SimResult simulate_single(double sigma2, double beta, const SimConfig& config) {
  return simulate_two_type(ModelParams{beta, sigma2, 0.0}, config);
}

}  // namespace bbm
