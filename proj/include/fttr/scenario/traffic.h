// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "fttr/scenario/config.h"
#include "fttr/sim/rng.h"

namespace fttr::scenario {

struct Arrival {
  SimTime at{};
  std::uint32_t size = 0;
};

/// Open-loop arrival process of one flow. Draws come from a private
/// substream keyed by the flow id, never from a node's stream.
class TrafficSource {
 public:
  TrafficSource(const FlowSpec& spec, std::uint64_t seed);

  /// Appends every arrival with at <= until, in time order.
  void pull(SimTime until, std::vector<Arrival>& out);
  const FlowSpec& spec() const { return spec_; }
  /// Mean inter-arrival of the rate-driven models.
  Duration interval() const { return interval_; }

 private:
  std::uint32_t draw_size();
  void advance();

  FlowSpec spec_;
  sim::RngStream rng_;
  Duration interval_{0};
  std::optional<SimTime> next_;
  std::uint32_t batch_left_ = 0;
};

/// Substream index of flow `id`; node substreams use [0, 0xFFFF].
inline std::uint64_t flow_substream(std::uint32_t id) { return 0x10000ULL + id; }

}  // namespace fttr::scenario
