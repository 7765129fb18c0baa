// SPDX-License-Identifier: Apache-2.0
#include "fttr/management/alarms.h"

#include <stdexcept>

namespace fttr::management {

const char* to_string(AlarmKind k) {
  switch (k) {
    case AlarmKind::LinkDown: return "link_down";
    case AlarmKind::Unresponsive: return "unresponsive";
    case AlarmKind::SlotViolation: return "slot_violation";
    case AlarmKind::BufferOverflow: return "buffer_overflow";
  }
  return "unknown";
}

bool AlarmLog::raise(NodeId source, AlarmKind kind, SimTime at) {
  if (open_.count({source, kind})) return false;
  open_[{source, kind}] = alarms_.size();
  alarms_.push_back({source, kind, at, std::nullopt});
  lines_.push_back(std::to_string(to_ns(at)) + " " + to_string(source) + " " + to_string(kind) + " raised");
  return true;
}

bool AlarmLog::clear(NodeId source, AlarmKind kind, SimTime at) {
  auto it = open_.find({source, kind});
  if (it == open_.end()) return false;
  alarms_[it->second].cleared_at = at;
  open_.erase(it);
  lines_.push_back(std::to_string(to_ns(at)) + " " + to_string(source) + " " + to_string(kind) + " cleared");
  return true;
}

bool AlarmLog::active(NodeId source, AlarmKind kind) const { return open_.count({source, kind}) != 0; }

std::size_t AlarmLog::count(AlarmKind kind) const {
  std::size_t n = 0;
  for (const Alarm& a : alarms_) n += a.kind == kind;
  return n;
}

LivenessMonitor::LivenessMonitor(std::uint32_t k_miss, AlarmLog& log) : k_miss_{k_miss}, log_{log} {
  if (k_miss_ == 0) throw std::invalid_argument{"k_miss must be at least 1"};
}

void LivenessMonitor::track(NodeId sfu) { state_[sfu]; }

void LivenessMonitor::heard(NodeId sfu) {
  auto it = state_.find(sfu);
  if (it != state_.end()) it->second.heard = true;
}

void LivenessMonitor::set_sleeping(NodeId sfu, bool sleeping) { state_.at(sfu).sleeping = sleeping; }

void LivenessMonitor::set_link_down(bool down, SimTime at) {
  if (down == link_down_) return;
  link_down_ = down;
  for (auto& [sfu, s] : state_) {
    if (down) {
      log_.raise(sfu, AlarmKind::LinkDown, at);
      log_.clear(sfu, AlarmKind::Unresponsive, at);
    } else {
      log_.clear(sfu, AlarmKind::LinkDown, at);
    }
    s.misses = 0;
    s.heard = false;
  }
}

void LivenessMonitor::poll(SimTime at) {
  for (auto& [sfu, s] : state_) {
    if (s.heard) {
      s.misses = 0;
      log_.clear(sfu, AlarmKind::Unresponsive, at);
    } else if (s.sleeping || link_down_) {
      s.misses = 0;
    } else if (++s.misses >= k_miss_) {
      log_.raise(sfu, AlarmKind::Unresponsive, at);
    }
    s.heard = false;
  }
}

}  // namespace fttr::management
