// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "fttr/frames/pcs.h"
#include "fttr/sim/time.h"

namespace fttr::scheduling {

using namespace std::chrono_literals;

enum class SchedulerMode { DistributedBaseline, CentralizedCoordinated, MacIntegrated, PhyRelay };

const char* to_string(SchedulerMode m);
std::optional<SchedulerMode> parse_scheduler_mode(std::string_view s);

/// Contended Wi-Fi access (CSMA/CA) vs MFU-issued air grants.
inline bool uses_air_grants(SchedulerMode m) { return m != SchedulerMode::DistributedBaseline; }

/// Per-frame processing latency constants of each architecture variant.
struct ModeLatencies {
  Duration mfu{0};
  Duration sfu{0};
};
ModeLatencies default_latencies(SchedulerMode m);

/// Buffer status one SFU sends to the MFU each status cycle.
struct SfuStatusReport {
  NodeId sfu{};
  std::uint64_t buffered_bytes = 0;  // Wi-Fi downlink queue, not yet covered by grants
  std::uint8_t top_priority = 0;     // highest priority present; 0 when empty
  std::uint16_t active_users = 0;
  SimTime timestamp{};

  friend bool operator==(const SfuStatusReport&, const SfuStatusReport&) = default;
};

enum class GrantReason { Downlink, UplinkTrigger };
const char* to_string(GrantReason r);

struct AirGrant {
  NodeId sfu{};
  SimTime start{};
  Duration max_duration{};
  GrantReason reason = GrantReason::Downlink;

  SimTime end() const { return start + max_duration; }
  friend bool operator==(const AirGrant&, const AirGrant&) = default;
};

/// Optical upstream demand. A request with ready_at set is pinned: its slot
/// must start exactly at ready_at (OFDMA pre-request).
struct UplinkBwRequest {
  NodeId sfu{};
  std::uint64_t bytes_expected = 0;
  frames::TcontId tcont = frames::kDataTcont;
  std::optional<SimTime> ready_at;
};

}  // namespace fttr::scheduling
