// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace fttr::sim {

/// Deterministic random stream. Each node owns one substream split from the
/// master seed, so adding a node never perturbs another node's draws.
///
/// Draws are built from raw mt19937_64 output rather than std::*_distribution,
/// whose algorithms differ between standard library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t substream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t substream() const { return substream_; }
  std::uint64_t draws() const { return draws_; }

  std::uint64_t next_u64();
  /// Uniform integer in [lo, hi], inclusive. Unbiased (rejection sampling).
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  /// Uniform real in [0, 1).
  double uniform01();
  /// Exponential with the given mean.
  double exponential(double mean);

 private:
  std::uint64_t seed_;
  std::uint64_t substream_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fttr::sim
