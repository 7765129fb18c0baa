// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "fttr/scheduling/types.h"

namespace fttr::scheduling {

struct RuAssignment {
  NodeId sta{};
  std::uint64_t ru_bytes = 0;
};

/// OFDMA pre-request: Σ ru_bytes plus a per-STA overhead, issued before the
/// air burst completes. nullopt for an empty allocation.
std::optional<UplinkBwRequest> ofdma_request(NodeId sfu, std::span<const RuAssignment> rus,
                                             std::uint64_t per_sta_overhead);

/// Digitized baseband volume of an air burst: ceil(duration · rate · bits / 8e9).
/// I/Q pairs are folded into bits_per_sample.
std::uint64_t phy_relay_bytes(Duration air, std::uint64_t samples_per_second, std::uint32_t bits_per_sample);

/// Optical time needed to forward `bytes`: ceil(bytes · 8e9 / rate).
Duration phy_relay_slot(std::uint64_t bytes, DataRate optical_upstream);

}  // namespace fttr::scheduling
