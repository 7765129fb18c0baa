// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fttr/energy/power.h"

namespace fttr::energy {

struct StateInterval {
  PowerState state = PowerState::Active;
  SimTime enter{};
  SimTime exit{};
  double watts = 0;
  double joules() const { return static_cast<double>(to_ns(exit - enter)) * 1e-9 * watts; }
};

/// Per-node state history. Each node's intervals must tile [0, horizon].
class EnergyLedger {
 public:
  void add_node(NodeId node, NodeType type, PowerState initial, double watts, SimTime at);
  /// Closes the open interval at `at` and opens a new one; a same-state,
  /// same-watts entry is a no-op.
  void enter(NodeId node, PowerState state, double watts, SimTime at);
  void close(SimTime horizon);

  PowerState state(NodeId node) const;
  NodeType type(NodeId node) const { return nodes_.at(node).type; }
  const std::vector<StateInterval>& intervals(NodeId node) const { return nodes_.at(node).done; }
  std::vector<NodeId> nodes() const;

  double joules(NodeId node) const;
  double total_joules() const;
  std::map<PowerState, Duration> residency(NodeId node) const;

  /// First gap/overlap found against [0, horizon], if any.
  std::optional<std::string> partition_violation(SimTime horizon) const;

 private:
  struct Node {
    NodeType type;
    std::vector<StateInterval> done;
    StateInterval open;
    bool closed = false;
  };
  std::map<NodeId, Node> nodes_;
};

/// Single-gateway baseline over the same activity: the gateway is Active
/// whenever the MFU is Active and Idle otherwise.
double ftth_baseline_joules(const std::vector<StateInterval>& mfu_intervals, const PowerProfile& profile);

}  // namespace fttr::energy
