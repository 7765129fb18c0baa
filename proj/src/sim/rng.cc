// SPDX-License-Identifier: Apache-2.0
#include "fttr/sim/rng.h"

#include <cmath>
#include <limits>

namespace fttr::sim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t substream)
    : seed_{seed}, substream_{substream}, engine_{splitmix64(seed ^ splitmix64(substream + 1))} {}

std::uint64_t RngStream::next_u64() {
  ++draws_;
  return engine_();
}

std::uint64_t RngStream::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return next_u64();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return lo + x % range;
}

double RngStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::exponential(double mean) { return -mean * std::log1p(-uniform01()); }

}  // namespace fttr::sim
