#include "tpctf/random.hpp"

#include <cmath>
#include <numbers>

namespace tpctf {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNoiseDomain = 0x4E4F495345000000ULL;  // "NOISE"
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_u64(std::uint64_t seed, std::uint64_t k) { return mix64(seed + (k + 1) * kGolden); }

double stream_uniform(std::uint64_t seed, std::uint64_t k) {
  return static_cast<double>(stream_u64(seed, k) >> 11) * 0x1.0p-53;
}

std::uint64_t noise_seed(std::uint64_t seed) { return mix64(seed ^ kNoiseDomain); }

double stream_normal(std::uint64_t seed, std::uint64_t k, bool second) {
  const double u1 = 1.0 - stream_uniform(seed, 2 * k);  // (0, 1]
  const double u2 = stream_uniform(seed, 2 * k + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return second ? r * std::sin(t) : r * std::cos(t);
}

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

}  // namespace tpctf
