// SPDX-License-Identifier: Apache-2.0
#include "fttr/scheduling/types.h"

namespace fttr::scheduling {

const char* to_string(SchedulerMode m) {
  switch (m) {
    case SchedulerMode::DistributedBaseline: return "distributed";
    case SchedulerMode::CentralizedCoordinated: return "centralized";
    case SchedulerMode::MacIntegrated: return "mac_integrated";
    case SchedulerMode::PhyRelay: return "phy_relay";
  }
  return "unknown";
}

std::optional<SchedulerMode> parse_scheduler_mode(std::string_view s) {
  for (auto m : {SchedulerMode::DistributedBaseline, SchedulerMode::CentralizedCoordinated, SchedulerMode::MacIntegrated,
                 SchedulerMode::PhyRelay})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

ModeLatencies default_latencies(SchedulerMode m) {
  switch (m) {
    case SchedulerMode::DistributedBaseline:
    case SchedulerMode::CentralizedCoordinated: return {0us, 20us};
    case SchedulerMode::MacIntegrated: return {25us, 0us};
    case SchedulerMode::PhyRelay: return {30us, 0us};
  }
  return {};
}

const char* to_string(GrantReason r) { return r == GrantReason::Downlink ? "downlink" : "uplink_trigger"; }

}  // namespace fttr::scheduling
