// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fttr/energy/ledger.h"
#include "fttr/energy/policy.h"
#include "fttr/energy/power.h"

namespace fttr::energy {

/// One SFU's power state machine. The owner feeds activity and timer ticks;
/// every accepted transition is written to the ledger.
class SfuPowerMachine {
 public:
  SfuPowerMachine(NodeId id, const PowerProfile& profile, bool iot_resident, bool savings, EnergyLedger& ledger,
                  SimTime start);

  NodeId id() const { return id_; }
  PowerState state() const { return state_; }
  EnergyPolicy policy() const { return policy_; }
  SimTime entered_at() const { return entered_; }
  SimTime last_activity() const { return last_activity_; }
  bool iot_resident() const { return iot_; }

  /// Traffic handled by the SFU. Wakes Idle/RfOff to Active (or ReducedTx
  /// under TxPowerAdjust). Returns false while asleep: the caller must wake it.
  bool activity(SimTime now);

  /// Inactivity rules; returns the new state when one was entered.
  std::optional<PowerState> on_timer(SimTime now);
  /// When on_timer should next run, if any rule is pending.
  std::optional<SimTime> next_deadline() const;

  void set_policy(EnergyPolicy p, SimTime now);

  /// Guarded explicit transition (MFU commands, wake completion).
  /// Illegal requests are rejected and counted.
  bool request(PowerState to, SimTime now);
  std::uint64_t rejected() const { return rejected_; }

  /// Starts a wake from LightSleep/DeepSleep; returns when it completes
  /// (the caller then requests Idle). nullopt if not asleep or already waking.
  std::optional<SimTime> begin_wake(SimTime now);
  bool waking() const { return waking_; }

  double watts(PowerState s) const;

 private:
  void enter(PowerState s, SimTime now);

  NodeId id_;
  const PowerProfile& profile_;
  bool iot_;
  bool savings_;
  EnergyLedger& ledger_;
  PowerState state_ = PowerState::Active;
  EnergyPolicy policy_ = EnergyPolicy::LightSleepPolicy;
  SimTime entered_;
  SimTime last_activity_;
  bool waking_ = false;
  std::uint64_t rejected_ = 0;
};

/// Deep sleep may be commanded only when every SFU last reported LightSleep
/// under DeepSleepPolicy.
struct SleepReport {
  PowerState state = PowerState::Active;
  EnergyPolicy policy = EnergyPolicy::LightSleepPolicy;
};
bool deep_sleep_allowed(const std::map<NodeId, SleepReport>& last_reports, std::size_t sfu_count);

/// Deep-sleep listen windows open at enter + k·T_listen (k ≥ 1) for `window`.
bool in_listen_window(SimTime deep_enter, SimTime now, Duration t_listen, Duration window);

/// MFU-side holding queue for a sleeping SFU; drops the oldest when full.
template <class Item>
class SleepBuffer {
 public:
  using SizeFn = std::function<std::size_t(const Item&)>;

  SleepBuffer(std::size_t capacity_bytes, SizeFn size) : cap_{capacity_bytes}, size_{std::move(size)} {}

  /// Returns the items evicted to make room (oldest first). An item larger
  /// than the whole capacity is itself dropped.
  std::vector<Item> push(Item item) {
    std::vector<Item> evicted;
    const std::size_t s = size_(item);
    if (s > cap_) {
      dropped_bytes_ += s;
      ++dropped_frames_;
      evicted.push_back(std::move(item));
      return evicted;
    }
    while (bytes_ + s > cap_) {
      bytes_ -= size_(q_.front());
      dropped_bytes_ += size_(q_.front());
      ++dropped_frames_;
      evicted.push_back(std::move(q_.front()));
      q_.pop_front();
    }
    bytes_ += s;
    q_.push_back(std::move(item));
    return evicted;
  }

  std::deque<Item> flush() {
    bytes_ = 0;
    return std::exchange(q_, {});
  }

  bool empty() const { return q_.empty(); }
  std::size_t frames() const { return q_.size(); }
  const std::deque<Item>& items() const { return q_; }
  std::size_t bytes() const { return bytes_; }
  std::size_t capacity() const { return cap_; }
  std::uint64_t dropped_frames() const { return dropped_frames_; }
  std::uint64_t dropped_bytes() const { return dropped_bytes_; }

 private:
  std::size_t cap_;
  SizeFn size_;
  std::deque<Item> q_;
  std::size_t bytes_ = 0;
  std::uint64_t dropped_frames_ = 0;
  std::uint64_t dropped_bytes_ = 0;
};

}  // namespace fttr::energy
