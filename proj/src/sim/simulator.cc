// SPDX-License-Identifier: Apache-2.0
#include "fttr/sim/simulator.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

namespace fttr::sim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::FrameArrival: return "frame_arrival";
    case EventKind::TimerExpiry: return "timer_expiry";
    case EventKind::GrantStart: return "grant_start";
    case EventKind::StateDeadline: return "state_deadline";
  }
  return "unknown";
}

void TraceDigest::mix(std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    hash_ ^= (v >> (8 * i)) & 0xFF;
    hash_ *= 0x100000001b3ULL;
  }
}

void TraceDigest::add(SimTime t, NodeId target, EventKind kind) {
  mix(static_cast<std::uint64_t>(to_ns(t)), 8);
  mix(to_underlying(target), 2);
  mix(static_cast<std::uint8_t>(kind), 1);
  ++events_;
}

std::string TraceDigest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
  return buf;
}

Simulator::Simulator(std::uint64_t seed) : seed_{seed} {}

EventId Simulator::schedule(SimTime at, NodeId target, EventKind kind, Action action) {
  if (at < now_) {
    std::fprintf(stderr, "fttr::sim: event for node %u scheduled at %lld ns, before now=%lld ns\n",
                 static_cast<unsigned>(to_underlying(target)), static_cast<long long>(to_ns(at)),
                 static_cast<long long>(to_ns(now_)));
    std::abort();
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Event{at, seq, target, kind, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  live_.insert(seq);
  ++counters_.scheduled;
  return EventId{seq};
}

bool Simulator::cancel(EventId id) {
  if (!id.valid() || live_.erase(id.seq) == 0) return false;
  ++counters_.cancelled;
  return true;
}

const TraceDigest& Simulator::run_until(SimTime horizon) {
  while (!heap_.empty() && heap_.front().fire_time <= horizon) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    if (live_.erase(ev.seq) == 0) continue;  // cancelled
    now_ = ev.fire_time;
    ++counters_.dispatched;
    digest_.add(ev.fire_time, ev.target, ev.kind);
    ev.action();
  }
  if (horizon > now_) now_ = horizon;
  return digest_;
}

EventCounters Simulator::counters() const {
  EventCounters c = counters_;
  c.pending = live_.size();
  return c;
}

RngStream& Simulator::rng(NodeId node) {
  auto it = streams_.find(node);
  if (it == streams_.end()) it = streams_.emplace(node, RngStream{seed_, to_underlying(node)}).first;
  return it->second;
}

}  // namespace fttr::sim
