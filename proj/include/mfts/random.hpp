#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mfts {

using Rng = std::mt19937_64;

/// Advances a splitmix64 state and returns the next value.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives a child seed from a root seed, a purpose tag and up to two
/// indices. Every parallel task in the project owns a seed produced here,
/// so results do not depend on scheduling or thread count.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform integer in [0, n). n must be > 0.
std::uint64_t bounded_int(Rng& rng, std::uint64_t n);

/// Standard normal draw (Box-Muller, two uniforms per call).
double normal01(Rng& rng);

/// Gamma(shape, 1) via Marsaglia-Tsang. shape > 0.
double gamma_sample(Rng& rng, double shape);

/// Beta(a, b) as a gamma ratio, clamped away from exact 0 and 1 so that
/// downstream products stay strictly positive.
double beta_sample(Rng& rng, double a, double b);

} // namespace mfts
