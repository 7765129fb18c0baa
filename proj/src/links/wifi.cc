// SPDX-License-Identifier: Apache-2.0
#include "fttr/links/wifi.h"

#include <stdexcept>

namespace fttr::links {
namespace {

bool power_of_two_minus_one(std::uint32_t v) { return ((v + 1) & v) == 0; }

}  // namespace

std::optional<std::string> wifi_params_violation(const WifiParams& p) {
  if (p.air_rate.bps() == 0) return "air_rate must be positive";
  if (!power_of_two_minus_one(p.cw_min)) return "cw_min must be 2^k - 1";
  if (!power_of_two_minus_one(p.cw_max)) return "cw_max must be 2^k - 1";
  if (p.cw_min > p.cw_max) return "cw_min exceeds cw_max";
  if (p.slot.count() <= 0) return "slot must be positive";
  if (p.difs.count() < 0 || p.sifs.count() < 0 || p.preamble.count() < 0 || p.ack_overhead.count() < 0)
    return "negative timing constant";
  if (p.max_aggregate_bytes == 0) return "max_aggregate_bytes must be positive";
  return std::nullopt;
}

Duration airtime(const WifiParams& p, std::size_t bytes) {
  return p.preamble + p.ack_overhead + p.air_rate.transmit_time(bytes);
}

std::size_t payload_fitting(const WifiParams& p, Duration window) {
  return p.air_rate.bytes_in(window - p.preamble - p.ack_overhead);
}

void InterferenceGraph::add_cell(NodeId cell) { adj_[cell]; }

void InterferenceGraph::add_conflict(NodeId a, NodeId b) {
  if (a == b) throw std::invalid_argument{"a cell cannot conflict with itself"};
  adj_[a].insert(b);
  adj_[b].insert(a);
}

bool InterferenceGraph::conflicts(NodeId a, NodeId b) const {
  auto it = adj_.find(a);
  return it != adj_.end() && it->second.count(b) != 0;
}

const std::set<NodeId>& InterferenceGraph::neighbors(NodeId cell) const {
  static const std::set<NodeId> kNone;
  auto it = adj_.find(cell);
  return it == adj_.end() ? kNone : it->second;
}

std::vector<NodeId> InterferenceGraph::cells() const {
  std::vector<NodeId> out;
  for (const auto& [c, n] : adj_) out.push_back(c);
  return out;
}

std::size_t InterferenceGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& [c, n] : adj_) twice += n.size();
  return twice / 2;
}

}  // namespace fttr::links
