#include "ntkeoc/rng.hpp"

#include <cmath>

namespace ntkeoc {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t key, std::uint64_t counter) {
  // two finalizer rounds over key + counter*phi decorrelate nearby counters
  return splitmix64(splitmix64(key + counter * kGolden) ^ key);
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t rng_key(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * kGolden + 1));
}

double rng_uniform(std::uint64_t key, std::uint64_t counter) {
  // 53 mantissa bits, offset by half an ulp: strictly inside (0, 1)
  return (static_cast<double>(mix(key, counter) >> 11) + 0.5) * 0x1p-53;
}

void rng_gaussian_pair(std::uint64_t key, std::uint64_t counter, double& g0, double& g1) {
  const double u1 = rng_uniform(key, 2 * counter);
  const double u2 = rng_uniform(key, 2 * counter + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 6.283185307179586477 * u2;
  g0 = r * std::cos(t);
  g1 = r * std::sin(t);
}

double rng_gaussian(std::uint64_t key, std::uint64_t counter) {
  double g0, g1;
  rng_gaussian_pair(key, counter, g0, g1);
  return g0;
}

}  // namespace ntkeoc
