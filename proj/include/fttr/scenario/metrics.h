// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fttr/energy/power.h"
#include "fttr/links/air_channel.h"
#include "fttr/links/optical.h"
#include "fttr/scenario/config.h"

namespace fttr::scenario {

/// Nearest-rank percentiles over complete per-frame records.
struct LatencySummary {
  std::uint64_t samples = 0;
  std::optional<std::int64_t> p50, p95, p99, max;
};
/// `sorted` must be ascending and non-empty; pct in (0, 100].
std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, double pct);
LatencySummary summarize(std::vector<std::int64_t> samples);

struct FlowMetrics {
  std::uint32_t id = 0;
  Direction direction = Direction::Downlink;
  NodeId sfu{};
  frames::ServiceClass service = frames::ServiceClass::Background;
  std::uint8_t priority = 0;
  bool ofdma = false;
  std::uint64_t offered_frames = 0, offered_bytes = 0;
  std::uint64_t delivered_frames = 0, delivered_bytes = 0;
  std::uint64_t lost_frames = 0, lost_bytes = 0;
  std::uint64_t pending_frames = 0, pending_bytes = 0;  // still in the network at the horizon
  LatencySummary latency;
  std::optional<LatencySummary> forwarding_delay;  // OFDMA rounds: reception end to optical slot
};

struct CellMetrics {
  NodeId sfu{};
  double utilization = 0;
  links::CellStats stats;
  std::uint64_t grants = 0;
};

struct NodeEnergy {
  NodeId node{};
  energy::NodeType type = energy::NodeType::Sfu;
  double joules = 0;
  std::map<energy::PowerState, Duration> residency;
};

struct LossMetrics {
  std::uint64_t queue_overflow = 0;
  std::uint64_t air = 0;
  std::uint64_t sleep_buffer = 0;
  std::uint64_t sleep_receiver = 0;
  std::uint64_t link_down = 0;
  std::uint64_t sfu_down = 0;
  std::uint64_t relay_overflow = 0;
  std::uint64_t upstream = 0;
};

struct ManagementMetrics {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;  // responses that reached the OLT
  std::uint64_t failed = 0;     // error responses and lost messages
  std::uint64_t pending = 0;
  std::uint64_t unknown_targets = 0;
  std::int64_t max_upstream_delay_ns = 0;
  std::uint64_t alarms = 0;
  std::uint64_t status_reports = 0;
};

struct EnergyMetrics {
  std::vector<NodeEnergy> nodes;
  double fttr_joules = 0;
  double ftth_joules = 0;
  double ratio = 0;
  std::uint64_t deep_sleep_commands = 0;
  std::uint64_t wake_commands = 0;
  std::uint64_t rejected_transitions = 0;
};

struct SchedulingMetrics {
  std::uint64_t grants = 0;
  std::uint64_t trigger_rounds = 0;
  std::uint64_t tamaps = 0;
  std::uint64_t pinned_slots = 0;
  std::uint64_t deferred_pins = 0;
};

struct RunMetrics {
  std::string scenario;
  std::string fingerprint;
  std::uint64_t seed = 0;
  scheduling::SchedulerMode mode = scheduling::SchedulerMode::CentralizedCoordinated;
  Duration horizon{0};
  bool savings = true;

  std::vector<FlowMetrics> flows;
  std::vector<CellMetrics> cells;
  links::OpticalStats optical;
  SchedulingMetrics scheduling;
  ManagementMetrics management;
  EnergyMetrics energy;
  LossMetrics losses;
  std::string digest;
  std::uint64_t events = 0;

  const FlowMetrics* flow(std::uint32_t id) const;
  std::uint64_t collisions() const;
  std::uint64_t coordination_failures() const;
};

/// Summary document; byte-stable for identical runs.
std::string summary_json(const RunMetrics& m);
/// Per-flow table, one header row.
std::string flows_csv(const RunMetrics& m);

class CompareError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// Per-metric deltas (b - a) and ratios (b / a) between two summary
/// documents. Refuses summaries of different scenarios.
std::string compare_summaries(const std::string& summary_a, const std::string& summary_b);

}  // namespace fttr::scenario
