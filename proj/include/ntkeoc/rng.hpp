#pragma once

#include <cstdint>

namespace ntkeoc {

// Counter-based deterministic RNG: every draw is a pure function of
// (key, counter), so results do not depend on threading, call order, or
// platform library internals. Quality is that of the splitmix64 finalizer,
// ample for sampling and Monte Carlo, not for cryptography.

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream key from a user seed and a stream index.
std::uint64_t rng_key(std::uint64_t seed, std::uint64_t stream);

/// Uniform draw in the open interval (0, 1).
double rng_uniform(std::uint64_t key, std::uint64_t counter);

/// One pair of independent N(0,1) draws per counter (Box-Muller).
void rng_gaussian_pair(std::uint64_t key, std::uint64_t counter, double& g0, double& g1);

/// Single N(0,1) draw per counter.
double rng_gaussian(std::uint64_t key, std::uint64_t counter);

}  // namespace ntkeoc
