// SPDX-License-Identifier: Apache-2.0
#include "fttr/links/optical.h"

#include <algorithm>
#include <stdexcept>

namespace fttr::links {

const char* to_string(UpstreamStatus s) {
  switch (s) {
    case UpstreamStatus::InFlight: return "in_flight";
    case UpstreamStatus::Delivered: return "delivered";
    case UpstreamStatus::SlotViolation: return "slot_violation";
    case UpstreamStatus::Collision: return "collision";
    case UpstreamStatus::LinkDown: return "link_down";
  }
  return "unknown";
}

OpticalLink::OpticalLink(DataRate downstream, DataRate upstream) : down_{downstream}, up_{upstream} {
  if (down_.bps() == 0 || up_.bps() == 0) throw std::invalid_argument{"optical rates must be positive"};
}

void OpticalLink::attach(NodeId sfu, Duration prop_delay) {
  if (prop_delay.count() < 0) throw std::invalid_argument{"negative propagation delay"};
  delay_[sfu] = prop_delay;
}

std::vector<NodeId> OpticalLink::sfus() const {
  std::vector<NodeId> out;
  for (const auto& [id, d] : delay_) out.push_back(id);
  return out;
}

OpticalLink::DownstreamSend OpticalLink::send_downstream(SimTime now, std::size_t wire_bytes) {
  DownstreamSend s;
  s.tx_start = std::max(now, down_free_);
  s.tx_end = s.tx_start + down_.transmit_time(wire_bytes);
  down_free_ = s.tx_end;
  ++stats_.down_frames;
  stats_.down_bytes_sent += wire_bytes;
  for (const auto& [sfu, delay] : delay_) {
    if (cut_) {
      stats_.down_bytes_lost += wire_bytes;
      ++stats_.cut_losses;
      continue;
    }
    s.deliveries.push_back({sfu, s.tx_end + delay});
    stats_.down_bytes_delivered += wire_bytes;
  }
  return s;
}

UpstreamBurst OpticalLink::send_upstream(SimTime now, NodeId sfu, std::size_t wire_bytes, SimTime slot_start,
                                         Duration slot_len) {
  while (!inflight_.empty() && inflight_.front().resolved && inflight_.front().burst.arrival <= now)
    inflight_.pop_front();

  UpstreamBurst b;
  b.id = next_burst_++;
  b.sfu = sfu;
  b.bytes = wire_bytes;
  b.start = now;
  b.end = now + up_.transmit_time(wire_bytes);
  b.arrival = b.end + delay_.at(sfu);
  ++stats_.up_bursts;
  stats_.up_bytes_sent += wire_bytes;

  if (now < slot_start || b.end > slot_start + slot_len) {
    b.status = UpstreamStatus::SlotViolation;
    ++stats_.slot_violations;
    stats_.up_bytes_dropped += wire_bytes;
    return b;
  }
  if (cut_) {
    b.status = UpstreamStatus::LinkDown;
    ++stats_.cut_losses;
    stats_.up_bytes_dropped += wire_bytes;
    return b;
  }

  const SimTime rx_start = now + delay_.at(sfu);
  for (auto& t : inflight_) {
    UpstreamBurst& other = t.burst;
    if (t.resolved || other.sfu == sfu) continue;
    const SimTime other_rx_start = other.start + delay_.at(other.sfu);
    if (rx_start < other.arrival && other_rx_start < b.arrival) {
      if (other.status == UpstreamStatus::InFlight) ++stats_.upstream_collisions;
      other.status = UpstreamStatus::Collision;
      b.status = UpstreamStatus::Collision;
    }
  }
  if (b.status == UpstreamStatus::Collision) ++stats_.upstream_collisions;
  inflight_.push_back({b, false});
  return b;
}

UpstreamStatus OpticalLink::complete_upstream(std::uint64_t burst_id) {
  for (auto& t : inflight_) {
    if (t.burst.id != burst_id) continue;
    if (t.resolved) return t.burst.status;
    t.resolved = true;
    if (t.burst.status == UpstreamStatus::InFlight) {
      t.burst.status = UpstreamStatus::Delivered;
      stats_.up_bytes_delivered += t.burst.bytes;
    } else {
      stats_.up_bytes_dropped += t.burst.bytes;
    }
    return t.burst.status;
  }
  throw std::out_of_range{"unknown upstream burst"};
}

}  // namespace fttr::links
