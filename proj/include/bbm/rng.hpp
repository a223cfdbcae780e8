#pragma once

#include <cmath>
#include <cstdint>

namespace bbm {

// Counter-based random number generation. Every draw is a pure function of
// (key, counter), where the key encodes (seed, lineage); results are
// therefore independent of traversal order and worker scheduling.
namespace rng {

// splitmix64 finalizer (Stafford mix13).
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t word(std::uint64_t key, std::uint64_t counter) {
  return mix(key + counter * 0x9E3779B97F4A7C15ULL);
}

// Seed for the i-th Monte Carlo run of a batch.
inline std::uint64_t derive_run_seed(std::uint64_t seed, std::uint64_t run) {
  return mix(mix(seed ^ 0xB5297A4D3A2D9FEBULL) + run);
}

}  // namespace rng

// One independent draw stream. Streams for children are spawned from parent
// draws, so the genealogy fixes every random number regardless of the order
// subtrees are simulated in.
class RngStream {
 public:
  RngStream() : key_(0), ctr_(0) {}
  explicit RngStream(std::uint64_t key) : key_(key), ctr_(0) {}

  static RngStream root(std::uint64_t seed) {
    return RngStream(rng::mix(seed ^ 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t next_word() { return rng::word(key_, ctr_++); }

  // Uniform on (0, 1]; never 0, so logs are safe.
  double u01() {
    return static_cast<double>((next_word() >> 11) + 1) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(u01()) / rate; }

  // One standard normal by Box-Muller (consumes two words).
  double normal() {
    const double u1 = u01();
    const double u2 = static_cast<double>(next_word() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  RngStream spawn() { return RngStream(next_word()); }

  // Observation stream: side draws that do not advance this stream's
  // counter, so a snapshot can be inspected without perturbing evolution.
  RngStream observer() const {
    return RngStream(rng::mix(key_ ^ 0xA0761D6478BD642FULL));
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return ctr_; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_;
};

}  // namespace bbm
