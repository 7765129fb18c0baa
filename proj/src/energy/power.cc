// SPDX-License-Identifier: Apache-2.0
#include "fttr/energy/power.h"

namespace fttr::energy {

const char* to_string(PowerState s) {
  switch (s) {
    case PowerState::Active: return "active";
    case PowerState::Idle: return "idle";
    case PowerState::LightSleep: return "light_sleep";
    case PowerState::DeepSleep: return "deep_sleep";
    case PowerState::RfOff: return "rf_off";
    case PowerState::ReducedTx: return "reduced_tx";
  }
  return "unknown";
}

bool legal_transition(PowerState from, PowerState to) {
  using enum PowerState;
  switch (from) {
    case Active: return to == Idle || to == ReducedTx;
    case ReducedTx: return to == Active || to == Idle;
    case Idle: return to == Active || to == ReducedTx || to == LightSleep || to == RfOff;
    case RfOff: return to == Active || to == Idle;
    case LightSleep: return to == DeepSleep || to == Idle;
    case DeepSleep: return to == Idle;
  }
  return false;
}

bool is_sleep(PowerState s) { return s == PowerState::LightSleep || s == PowerState::DeepSleep; }

const char* to_string(NodeType t) {
  switch (t) {
    case NodeType::Mfu: return "mfu";
    case NodeType::Sfu: return "sfu";
    case NodeType::FtthGateway: return "ftth_gateway";
  }
  return "unknown";
}

PowerProfile default_power_profile() {
  using enum PowerState;
  PowerProfile p;
  p.mfu[Active] = 12.0;
  p.mfu[Idle] = 10.0;
  p.mfu[ReducedTx] = 10.0;
  p.mfu[RfOff] = 10.0;
  p.mfu[LightSleep] = 10.0;
  p.mfu[DeepSleep] = 10.0;

  p.sfu[Active] = 6.0;
  p.sfu[Idle] = 5.0;
  p.sfu[ReducedTx] = 4.5;
  p.sfu[RfOff] = 3.0;
  p.sfu[LightSleep] = 2.0;
  p.sfu[DeepSleep] = 0.5;

  p.ftth[Active] = 20.0;
  p.ftth[Idle] = 16.0;
  p.ftth[ReducedTx] = 16.0;
  p.ftth[RfOff] = 16.0;
  p.ftth[LightSleep] = 16.0;
  p.ftth[DeepSleep] = 16.0;
  return p;
}

std::optional<std::string> power_profile_violation(const PowerProfile& p) {
  using enum PowerState;
  for (const StateWatts* w : {&p.mfu, &p.sfu, &p.ftth}) {
    const StateWatts& s = *w;
    if (!(s[Active] >= s[Idle] && s[Idle] >= s[ReducedTx] && s[ReducedTx] >= s[RfOff] && s[RfOff] >= s[LightSleep] &&
          s[LightSleep] >= s[DeepSleep] && s[DeepSleep] > 0))
      return "power ordering Active >= Idle >= ReducedTx >= RfOff >= LightSleep >= DeepSleep > 0 violated";
  }
  if (p.optical_rate_saving < 0 || p.optical_rate_saving >= p.sfu[Active]) return "optical_rate_saving out of range";
  for (Duration d : {p.t_act_idle, p.t_idle_sleep, p.t_listen, p.listen_window, p.wake_light, p.wake_deep})
    if (d.count() <= 0) return "timers and latencies must be positive";
  if (p.listen_window > p.t_listen) return "listen window longer than the listen interval";
  return std::nullopt;
}

}  // namespace fttr::energy
