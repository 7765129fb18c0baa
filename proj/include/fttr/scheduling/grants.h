// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fttr/links/wifi.h"
#include "fttr/scheduling/types.h"

namespace fttr::scheduling {

/// Grant order: highest priority present desc, buffered bytes desc, NodeId asc.
bool grant_precedes(const SfuStatusReport& a, const SfuStatusReport& b);

struct GrantParams {
  Duration txop_max = 5ms;
  /// Latest allowed grant start, relative to the plan start.
  Duration lookahead = 1ms;
  /// Airtime needed to drain `bytes` from `sfu`'s cell, overheads included.
  std::function<Duration(NodeId sfu, std::uint64_t bytes)> needed_airtime;
};

/// Stateful downlink air-grant sequencer. Remembers when each cell's last
/// grant ends so successive plans never overlap earlier ones.
class GrantPlanner {
 public:
  GrantPlanner(links::InterferenceGraph graph, GrantParams params);

  /// Grants for reports with nonzero buffers, in comparator order. Each
  /// starts when the cell and all of its conflicting neighbours are free.
  std::vector<AirGrant> plan(SimTime plan_start, std::span<const SfuStatusReport> reports);

  SimTime busy_until(NodeId cell) const;
  /// Earliest start >= at with the cell and its neighbours free.
  SimTime earliest_start(NodeId cell, SimTime at) const;
  /// Books a grant placed outside plan(), e.g. an uplink trigger round.
  void reserve(const AirGrant& g);
  const GrantParams& params() const { return params_; }

 private:
  links::InterferenceGraph graph_;
  GrantParams params_;
  std::map<NodeId, SimTime> busy_until_;
};

/// Needed airtime for `bytes` sent as back-to-back aggregates.
Duration drain_airtime(const links::WifiParams& p, std::uint64_t bytes);

/// Structural check: no two grants to conflicting cells (or the same cell)
/// overlap in time. Returns the first offending pair.
std::optional<std::string> grant_overlap_violation(std::span<const AirGrant> grants,
                                                   const links::InterferenceGraph& graph);

}  // namespace fttr::scheduling
