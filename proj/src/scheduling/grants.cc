// SPDX-License-Identifier: Apache-2.0
#include "fttr/scheduling/grants.h"

#include <algorithm>
#include <stdexcept>

namespace fttr::scheduling {

bool grant_precedes(const SfuStatusReport& a, const SfuStatusReport& b) {
  if (a.top_priority != b.top_priority) return a.top_priority > b.top_priority;
  if (a.buffered_bytes != b.buffered_bytes) return a.buffered_bytes > b.buffered_bytes;
  return a.sfu < b.sfu;
}

GrantPlanner::GrantPlanner(links::InterferenceGraph graph, GrantParams params)
    : graph_{std::move(graph)}, params_{std::move(params)} {
  if (!params_.needed_airtime) throw std::invalid_argument{"grant planner needs an airtime function"};
  if (params_.txop_max.count() <= 0) throw std::invalid_argument{"txop_max must be positive"};
}

SimTime GrantPlanner::busy_until(NodeId cell) const {
  auto it = busy_until_.find(cell);
  return it == busy_until_.end() ? kTimeZero : it->second;
}

SimTime GrantPlanner::earliest_start(NodeId cell, SimTime at) const {
  SimTime start = std::max(at, busy_until(cell));
  for (NodeId n : graph_.neighbors(cell)) start = std::max(start, busy_until(n));
  return start;
}

void GrantPlanner::reserve(const AirGrant& g) {
  if (g.start < earliest_start(g.sfu, g.start)) throw std::logic_error{"reserved grant overlaps a planned one"};
  busy_until_[g.sfu] = g.end();
}

std::vector<AirGrant> GrantPlanner::plan(SimTime plan_start, std::span<const SfuStatusReport> reports) {
  std::vector<SfuStatusReport> order(reports.begin(), reports.end());
  std::sort(order.begin(), order.end(), grant_precedes);

  std::vector<AirGrant> out;
  const SimTime latest = plan_start + params_.lookahead;
  for (const SfuStatusReport& r : order) {
    if (r.buffered_bytes == 0) continue;
    const SimTime start = earliest_start(r.sfu, plan_start);
    if (start > latest) continue;
    const Duration need = params_.needed_airtime(r.sfu, r.buffered_bytes);
    const Duration dur = std::min(need, params_.txop_max);
    if (dur.count() <= 0) continue;
    out.push_back({r.sfu, start, dur, GrantReason::Downlink});
    busy_until_[r.sfu] = start + dur;
  }
  return out;
}

Duration drain_airtime(const links::WifiParams& p, std::uint64_t bytes) {
  const std::uint64_t full = bytes / p.max_aggregate_bytes;
  const std::uint64_t rest = bytes % p.max_aggregate_bytes;
  Duration d = links::airtime(p, p.max_aggregate_bytes) * static_cast<std::int64_t>(full);
  if (rest > 0) d += links::airtime(p, rest);
  return d;
}

std::optional<std::string> grant_overlap_violation(std::span<const AirGrant> grants,
                                                   const links::InterferenceGraph& graph) {
  std::vector<AirGrant> sorted(grants.begin(), grants.end());
  std::sort(sorted.begin(), sorted.end(), [](const AirGrant& a, const AirGrant& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size() && sorted[j].start < sorted[i].end(); ++j) {
      const AirGrant& a = sorted[i];
      const AirGrant& b = sorted[j];
      if (a.sfu == b.sfu || graph.conflicts(a.sfu, b.sfu))
        return "grants to " + to_string(a.sfu) + " @" + std::to_string(to_ns(a.start)) + " and " + to_string(b.sfu) +
               " @" + std::to_string(to_ns(b.start)) + " overlap";
    }
  }
  return std::nullopt;
}

}  // namespace fttr::scheduling
