// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "fttr/sim/time.h"

namespace fttr::links {

struct OpticalStats {
  std::uint64_t down_frames = 0;
  std::uint64_t down_bytes_sent = 0;
  std::uint64_t down_bytes_delivered = 0;  // per receiving SFU
  std::uint64_t down_bytes_lost = 0;       // per SFU, fiber cut
  std::uint64_t up_bursts = 0;
  std::uint64_t up_bytes_sent = 0;
  std::uint64_t up_bytes_delivered = 0;
  std::uint64_t up_bytes_dropped = 0;
  std::uint64_t slot_violations = 0;
  std::uint64_t upstream_collisions = 0;
  std::uint64_t cut_losses = 0;
};

enum class UpstreamStatus { InFlight, Delivered, SlotViolation, Collision, LinkDown };
const char* to_string(UpstreamStatus s);

struct UpstreamBurst {
  std::uint64_t id = 0;
  NodeId sfu{};
  std::size_t bytes = 0;
  SimTime start{};
  SimTime end{};
  SimTime arrival{};  // at the MFU receiver
  UpstreamStatus status = UpstreamStatus::InFlight;
};

/// Point-to-multipoint indoor fiber: a serialized broadcast transmitter at the
/// MFU and a slotted upstream receiver. Byte counts are wire bytes.
class OpticalLink {
 public:
  OpticalLink(DataRate downstream, DataRate upstream);

  void attach(NodeId sfu, Duration prop_delay);
  bool attached(NodeId sfu) const { return delay_.count(sfu) != 0; }
  Duration prop_delay(NodeId sfu) const { return delay_.at(sfu); }
  std::vector<NodeId> sfus() const;

  DataRate downstream_rate() const { return down_; }
  DataRate upstream_rate() const { return up_; }

  /// A cut fiber delivers nothing in either direction.
  void set_cut(bool cut) { cut_ = cut; }
  bool cut() const { return cut_; }

  struct Delivery {
    NodeId sfu;
    SimTime at;
  };
  struct DownstreamSend {
    SimTime tx_start;
    SimTime tx_end;
    std::vector<Delivery> deliveries;
  };

  /// Broadcast: serialization starts when the transmitter frees up; each
  /// attached SFU receives at tx_end + its propagation delay.
  DownstreamSend send_downstream(SimTime now, std::size_t wire_bytes);
  SimTime downstream_free_at() const { return down_free_; }

  /// Upstream burst starting now inside the slot [slot_start, slot_start + slot_len].
  /// A burst that does not fit is dropped as a slot violation. Overlap at the
  /// receiver with another SFU's burst marks both as collided; the outcome is
  /// final once complete_upstream() is called at the arrival time.
  UpstreamBurst send_upstream(SimTime now, NodeId sfu, std::size_t wire_bytes, SimTime slot_start, Duration slot_len);
  UpstreamStatus complete_upstream(std::uint64_t burst_id);

  const OpticalStats& stats() const { return stats_; }

 private:
  DataRate down_;
  DataRate up_;
  std::map<NodeId, Duration> delay_;
  SimTime down_free_ = kTimeZero;
  bool cut_ = false;
  std::uint64_t next_burst_ = 1;
  struct Tracked {
    UpstreamBurst burst;
    bool resolved = false;
  };
  std::deque<Tracked> inflight_;
  OpticalStats stats_;
};

}  // namespace fttr::links
