#pragma once

#include <cstdint>
#include <random>

namespace ckme {

using RandomStream = std::mt19937_64;

/// Named substreams of one experiment seed. Distinct roles never share draws.
enum class StreamRole : std::uint64_t {
  grid = 1,
  training = 2,
  held_out = 3,
  oracle = 4,
  diagnostics = 5,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic stream for (seed, role, index).
RandomStream make_stream(std::uint64_t seed, StreamRole role, std::uint64_t index = 0);

double standard_normal(RandomStream& rng);
double uniform_real(RandomStream& rng, double low, double high);

} // namespace ckme
