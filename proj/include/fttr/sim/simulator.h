// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "fttr/sim/rng.h"
#include "fttr/sim/time.h"

namespace fttr::sim {

enum class EventKind : std::uint8_t {
  FrameArrival = 1,
  TimerExpiry = 2,
  GrantStart = 3,
  StateDeadline = 4,
};

const char* to_string(EventKind kind);

struct EventId {
  std::uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

using Action = std::function<void()>;

struct Event {
  SimTime fire_time;
  std::uint64_t seq;
  NodeId target;
  EventKind kind;
  Action action;
};

/// FNV-1a over the ordered (time, target, kind) tuples of dispatched events.
class TraceDigest {
 public:
  void add(SimTime t, NodeId target, EventKind kind);
  std::uint64_t value() const { return hash_; }
  std::uint64_t events() const { return events_; }
  std::string hex() const;
  friend bool operator==(const TraceDigest&, const TraceDigest&) = default;

 private:
  void mix(std::uint64_t v, int bytes);
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
  std::uint64_t events_ = 0;
};

struct EventCounters {
  std::uint64_t scheduled = 0;
  std::uint64_t dispatched = 0;
  std::uint64_t cancelled = 0;
  std::uint64_t pending = 0;  // still queued; beyond the horizon after run_until
};

/// Single-threaded discrete-event engine. Events fire in (fire_time, seq)
/// order; seq is the insertion counter, so ties resolve by insertion order.
class Simulator {
 public:
  explicit Simulator(std::uint64_t seed = 0);

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }
  std::uint64_t seed() const { return seed_; }

  /// Scheduling before now() is a logic error and aborts.
  EventId schedule(SimTime at, NodeId target, EventKind kind, Action action);
  EventId schedule_in(Duration delay, NodeId target, EventKind kind, Action action) {
    return schedule(now_ + delay, target, kind, std::move(action));
  }
  /// Returns false if the event already fired or was cancelled.
  bool cancel(EventId id);

  /// Dispatches every event with fire_time <= horizon, then parks the clock at
  /// the horizon. Later events stay queued and are counted as pending.
  const TraceDigest& run_until(SimTime horizon);

  const TraceDigest& digest() const { return digest_; }
  EventCounters counters() const;

  /// Per-node random stream, created on first use from (seed, node id).
  RngStream& rng(NodeId node);

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.seq > b.seq;
    }
  };

  std::uint64_t seed_;
  SimTime now_ = kTimeZero;
  std::uint64_t next_seq_ = 1;
  std::vector<Event> heap_;
  std::unordered_set<std::uint64_t> live_;
  EventCounters counters_;
  TraceDigest digest_;
  std::map<NodeId, RngStream> streams_;
};

}  // namespace fttr::sim
