// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fttr/sim/time.h"

namespace fttr::management {

enum class AlarmKind { LinkDown, Unresponsive, SlotViolation, BufferOverflow };
const char* to_string(AlarmKind k);

struct Alarm {
  NodeId source{};
  AlarmKind kind = AlarmKind::Unresponsive;
  SimTime raised_at{};
  std::optional<SimTime> cleared_at;
};

/// At most one active alarm per (source, kind).
class AlarmLog {
 public:
  /// False if that alarm is already active.
  bool raise(NodeId source, AlarmKind kind, SimTime at);
  /// False if there was nothing to clear.
  bool clear(NodeId source, AlarmKind kind, SimTime at);
  bool active(NodeId source, AlarmKind kind) const;

  const std::vector<Alarm>& alarms() const { return alarms_; }
  std::size_t count(AlarmKind kind) const;
  /// "<time_ns> <source> <kind> raised|cleared", in event order.
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<Alarm> alarms_;
  std::map<std::pair<NodeId, AlarmKind>, std::size_t> open_;
  std::vector<std::string> lines_;
};

/// Poll-boundary liveness: k_miss consecutive polls without a report from a
/// non-sleeping SFU raise Unresponsive; the first poll with a report clears it.
/// A fiber cut raises LinkDown for every SFU and suspends miss counting.
class LivenessMonitor {
 public:
  LivenessMonitor(std::uint32_t k_miss, AlarmLog& log);

  void track(NodeId sfu);
  void heard(NodeId sfu);
  void set_sleeping(NodeId sfu, bool sleeping);
  void set_link_down(bool down, SimTime at);
  void poll(SimTime at);

  std::uint32_t misses(NodeId sfu) const { return state_.at(sfu).misses; }

 private:
  struct State {
    bool heard = false;
    bool sleeping = false;
    std::uint32_t misses = 0;
  };
  std::uint32_t k_miss_;
  AlarmLog& log_;
  std::map<NodeId, State> state_;
  bool link_down_ = false;
};

}  // namespace fttr::management
