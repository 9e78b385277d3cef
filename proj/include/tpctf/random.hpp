#pragma once

#include <cstdint>

namespace tpctf {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Counter-based stream: x_k = mix64(seed + (k+1) * 0x9E3779B97F4A7C15).
std::uint64_t stream_u64(std::uint64_t seed, std::uint64_t k);
// Top 53 bits of x_k scaled to [0, 1).
double stream_uniform(std::uint64_t seed, std::uint64_t k);

// Seed of the noise stream derived from a user seed.
std::uint64_t noise_seed(std::uint64_t seed);

// Standard normal pair k via Box-Muller on uniforms 2k and 2k+1;
// `second` selects the sine branch.
double stream_normal(std::uint64_t seed, std::uint64_t k, bool second);

// Sequential convenience wrapper over the counter stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t next_u64() { return stream_u64(seed_, counter_++); }
  double uniform() { return stream_uniform(seed_, counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tpctf
