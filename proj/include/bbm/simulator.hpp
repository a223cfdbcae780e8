#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bbm/params.hpp"
#include "bbm/rng.hpp"

namespace bbm {

class population_overflow_error : public std::runtime_error {
 public:
  explicit population_overflow_error(const std::string& what)
      : std::runtime_error(what) {}
};

struct SimConfig {
  double t_end = 0.0;
  std::size_t max_population = 5'000'000;
  std::uint64_t seed = 0;
  std::vector<double> level_thresholds;  // positions for type-1 level counts

  // When set, type-2 subtrees whose expected number of descendants above
  // this position at t_end is below prune_epsilon are dropped. Only the
  // indicator {m_global >= threshold} and the type-1 statistics stay exact;
  // type-2 counts and maxima are then lower bounds. Never set when exact
  // counts are requested.
  std::optional<double> prune_threshold;
  double prune_epsilon = 1e-12;
};

struct SimResult {
  double m_global = 0.0;
  std::optional<double> m_type1;
  std::optional<double> m_type2;
  std::uint64_t n_type1 = 0;
  std::uint64_t n_type2 = 0;
  std::vector<std::uint64_t> level_counts;
};

enum class ParticleKind : std::uint8_t { Type1, Type2 };

// A live particle, advanced event-by-event. Positions are exact: each
// displacement over an inter-event interval is a single Gaussian draw.
struct Particle {
  ParticleKind kind;
  double position;      // at clock_origin
  double clock_origin;  // time of last position update
  double next_event;    // absolute time of the next branch/emission
  RngStream stream;
};

// Evolving population state; supports advancing to a later horizon so a run
// can be saved at time t and resumed bit-exactly.
struct SimState {
  double time = 0.0;
  std::vector<Particle> particles;
};

SimState initial_state(std::uint64_t seed);

// Advances every particle to the horizon, handling all branch and emission
// events on the way. Throws population_overflow_error if the population
// would exceed config.max_population.
void advance(SimState& state, const ModelParams& params, double horizon,
             const SimConfig& config);

// Reads off maxima and counts at state.time. Sampling the final displacement
// of each particle uses side streams, so observing does not perturb the
// evolution (advancing after an observation matches a fresh run exactly).
SimResult observe(const SimState& state, const ModelParams& params,
                  const SimConfig& config);

// One particle of type 1 at the origin, evolved to config.t_end.
SimResult simulate_two_type(const ModelParams& params, const SimConfig& config);

// Single-type (sigma2, beta)-BBM: type-1 dynamics with no emissions.
SimResult simulate_single(double sigma2, double beta, const SimConfig& config);

}  // namespace bbm
