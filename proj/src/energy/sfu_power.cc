// SPDX-License-Identifier: Apache-2.0
#include "fttr/energy/sfu_power.h"

#include <algorithm>

namespace fttr::energy {

SfuPowerMachine::SfuPowerMachine(NodeId id, const PowerProfile& profile, bool iot_resident, bool savings,
                                 EnergyLedger& ledger, SimTime start)
    : id_{id}, profile_{profile}, iot_{iot_resident}, savings_{savings}, ledger_{ledger}, entered_{start}, last_activity_{start} {
  ledger_.add_node(id_, NodeType::Sfu, state_, watts(state_), start);
}

double SfuPowerMachine::watts(PowerState s) const {
  double w = profile_.sfu[s];
  if (savings_ && policy_ == EnergyPolicy::OpticalRateAdaptation && (s == PowerState::Active || s == PowerState::ReducedTx))
    w -= profile_.optical_rate_saving;
  return w;
}

void SfuPowerMachine::enter(PowerState s, SimTime now) {
  state_ = s;
  entered_ = now;
  ledger_.enter(id_, s, watts(s), now);
}

bool SfuPowerMachine::request(PowerState to, SimTime now) {
  const bool sleep_target = to == PowerState::LightSleep || to == PowerState::DeepSleep;
  const bool needs_savings = sleep_target || to == PowerState::RfOff || to == PowerState::ReducedTx;
  if (!legal_transition(state_, to) || (iot_ && sleep_target) || (!savings_ && needs_savings)) {
    ++rejected_;
    return false;
  }
  if (is_sleep(state_) && to == PowerState::Idle) waking_ = false;
  enter(to, now);
  return true;
}

bool SfuPowerMachine::activity(SimTime now) {
  if (is_sleep(state_)) return false;
  last_activity_ = std::max(last_activity_, now);
  const PowerState busy =
      savings_ && policy_ == EnergyPolicy::TxPowerAdjust ? PowerState::ReducedTx : PowerState::Active;
  if (state_ == busy) return false;
  if (state_ == PowerState::Active || state_ == PowerState::ReducedTx) {
    enter(busy, now);
    return true;
  }
  if (state_ == PowerState::RfOff) {
    enter(PowerState::Active, now);
    if (busy == PowerState::ReducedTx) enter(busy, now);
    return true;
  }
  enter(busy, now);  // from Idle
  return true;
}

std::optional<SimTime> SfuPowerMachine::next_deadline() const {
  switch (state_) {
    case PowerState::Active:
    case PowerState::ReducedTx: return last_activity_ + profile_.t_act_idle;
    case PowerState::Idle: {
      const bool may_sleep = savings_ && (policy_ == EnergyPolicy::LightSleepPolicy ||
                                          policy_ == EnergyPolicy::DeepSleepPolicy || policy_ == EnergyPolicy::RfOff);
      if (!may_sleep) return std::nullopt;
      return std::max(entered_, last_activity_) + profile_.t_idle_sleep;
    }
    default: return std::nullopt;
  }
}

std::optional<PowerState> SfuPowerMachine::on_timer(SimTime now) {
  const auto due = next_deadline();
  if (!due || now < *due) return std::nullopt;
  if (state_ == PowerState::Active || state_ == PowerState::ReducedTx) {
    enter(PowerState::Idle, now);
    return state_;
  }
  if (state_ == PowerState::Idle) {
    const PowerState target = iot_ || policy_ == EnergyPolicy::RfOff ? PowerState::RfOff : PowerState::LightSleep;
    if (request(target, now)) return state_;
  }
  return std::nullopt;
}

void SfuPowerMachine::set_policy(EnergyPolicy p, SimTime now) {
  if (!savings_ || p == policy_) return;
  policy_ = p;
  if (p == EnergyPolicy::TxPowerAdjust && state_ == PowerState::Active) {
    enter(PowerState::ReducedTx, now);
  } else if (p != EnergyPolicy::TxPowerAdjust && state_ == PowerState::ReducedTx) {
    enter(PowerState::Active, now);
  } else {
    ledger_.enter(id_, state_, watts(state_), now);  // watts may change under rate adaptation
  }
}

std::optional<SimTime> SfuPowerMachine::begin_wake(SimTime now) {
  if (!is_sleep(state_) || waking_) return std::nullopt;
  waking_ = true;
  return now + (state_ == PowerState::DeepSleep ? profile_.wake_deep : profile_.wake_light);
}

bool deep_sleep_allowed(const std::map<NodeId, SleepReport>& last, std::size_t sfu_count) {
  if (sfu_count == 0 || last.size() != sfu_count) return false;
  return std::all_of(last.begin(), last.end(), [](const auto& kv) {
    return kv.second.state == PowerState::LightSleep && kv.second.policy == EnergyPolicy::DeepSleepPolicy;
  });
}

bool in_listen_window(SimTime deep_enter, SimTime now, Duration t_listen, Duration window) {
  if (now < deep_enter + t_listen) return false;
  return (now - deep_enter) % t_listen < window;
}

}  // namespace fttr::energy
