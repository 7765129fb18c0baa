// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fttr/sim/time.h"

namespace fttr::links {

using namespace std::chrono_literals;

/// Per-cell MAC constants. ACK exchange is folded into ack_overhead.
struct WifiParams {
  DataRate air_rate{1'200'000'000};
  Duration difs = 34us;
  Duration sifs = 16us;
  Duration slot = 9us;
  std::uint32_t cw_min = 15;
  std::uint32_t cw_max = 1023;
  Duration preamble = 40us;
  Duration ack_overhead = 60us;
  std::uint32_t retry_limit = 7;
  std::size_t max_aggregate_bytes = 65535;
};

/// nullopt when valid, else the first problem found.
std::optional<std::string> wifi_params_violation(const WifiParams& p);

/// Medium occupancy of one transmission of `bytes`.
Duration airtime(const WifiParams& p, std::size_t bytes);

/// Payload bytes that fit in `window` after fixed overheads.
std::size_t payload_fitting(const WifiParams& p, Duration window);

/// Undirected, irreflexive conflict relation between cells.
class InterferenceGraph {
 public:
  void add_cell(NodeId cell);
  /// Self-edges are rejected with std::invalid_argument.
  void add_conflict(NodeId a, NodeId b);

  bool has_cell(NodeId cell) const { return adj_.count(cell) != 0; }
  bool conflicts(NodeId a, NodeId b) const;
  const std::set<NodeId>& neighbors(NodeId cell) const;
  std::vector<NodeId> cells() const;
  std::size_t edge_count() const;

 private:
  std::map<NodeId, std::set<NodeId>> adj_;
};

}  // namespace fttr::links
