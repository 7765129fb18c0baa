// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fttr/sim/time.h"

namespace fttr::energy {

using namespace std::chrono_literals;

enum class PowerState : std::uint8_t { Active, Idle, LightSleep, DeepSleep, RfOff, ReducedTx };
inline constexpr std::size_t kPowerStateCount = 6;
const char* to_string(PowerState s);

/// Transition table:
///   Active <-> Idle, Active <-> ReducedTx, ReducedTx <-> Idle,
///   Idle -> LightSleep | RfOff, RfOff -> Active | Idle,
///   LightSleep -> DeepSleep | Idle, DeepSleep -> Idle.
bool legal_transition(PowerState from, PowerState to);
bool is_sleep(PowerState s);

enum class NodeType : std::uint8_t { Mfu, Sfu, FtthGateway };
const char* to_string(NodeType t);

/// Watts by state for one device type.
struct StateWatts {
  std::array<double, kPowerStateCount> w{};
  double operator[](PowerState s) const { return w[static_cast<std::size_t>(s)]; }
  double& operator[](PowerState s) { return w[static_cast<std::size_t>(s)]; }
};

struct PowerProfile {
  StateWatts mfu;
  StateWatts sfu;
  StateWatts ftth;
  /// Watts saved by an SFU whose policy is OpticalRateAdaptation while Active/ReducedTx.
  double optical_rate_saving = 0.5;

  Duration t_act_idle = 100ms;
  Duration t_idle_sleep = 10s;
  Duration t_listen = 1s;
  Duration listen_window = 10ms;
  Duration wake_light = 10ms;
  Duration wake_deep = 100ms;

  const StateWatts& watts(NodeType t) const { return t == NodeType::Mfu ? mfu : t == NodeType::Sfu ? sfu : ftth; }
};

/// Shipped defaults: MFU 12/10 W, SFU 6/5/4.5/3/2/0.5 W, FTTH gateway 20/16 W.
PowerProfile default_power_profile();

/// nullopt when the ordering Active ≥ Idle ≥ ReducedTx ≥ RfOff ≥ LightSleep ≥ DeepSleep > 0
/// and all latencies > 0 hold.
std::optional<std::string> power_profile_violation(const PowerProfile& p);

}  // namespace fttr::energy
