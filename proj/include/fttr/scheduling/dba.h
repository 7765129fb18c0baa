// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fttr/frames/pcs.h"
#include "fttr/scheduling/types.h"

namespace fttr::scheduling {

struct DbaParams {
  Duration cycle = 125us;
  Duration guard = 64ns;
  DataRate upstream{1'000'000'000};
  /// Per-SFU share of the dedicated OMCI T-CONT entry.
  Duration omci_subslot = 2us;
  /// Minimum guaranteed slot: one full-size FEM frame.
  std::uint64_t min_slot_bytes = 1522;
};

/// Upstream bursts are PCS frames without PLOAM/TAMap, PMA-encoded.
Duration burst_time(DataRate up, std::uint64_t payload_bytes);
/// Largest FEM payload whose burst fits in `slot`.
std::uint64_t burst_payload_capacity(DataRate up, Duration slot);

struct SlotAssignment {
  NodeId sfu{};
  std::uint64_t bytes_granted = 0;  // FEM bytes the slot can carry
  bool pinned = false;
};

struct TamapPlan {
  frames::Tamap tamap;
  std::vector<SlotAssignment> slots;  // parallel to the data entries, in entry order
  std::vector<UplinkBwRequest> deferred_pins;
};

/// One allocation cycle: pinned slots at their ready time, the OMCI entry
/// (kBroadcast, n_sfus sub-slots) in the first gap, then every other request
/// gets a minimum slot plus a share of the residual proportional to its bytes.
/// Every entry is followed by the guard time.
TamapPlan generate_tamap(std::span<const UplinkBwRequest> requests, std::size_t n_sfus, SimTime cycle_start,
                         const DbaParams& params);

/// Structural feasibility: frames-level TAMap checks plus guard spacing and
/// Σ(durations) + guards ≤ cycle.
std::optional<std::string> tamap_schedule_violation(const frames::Tamap& tamap, Duration guard);

/// Stateful DBA at the MFU: accumulates reported demand, carries any
/// shortfall into the next cycle, and holds pinned requests until their cycle.
class DbaAllocator {
 public:
  DbaAllocator(DbaParams params, std::vector<NodeId> sfus);

  void add_demand(NodeId sfu, std::uint64_t bytes);
  /// Replaces the outstanding demand (absolute backlog reports).
  void set_demand(NodeId sfu, std::uint64_t bytes) { demand_[sfu] = bytes; }
  void pin(UplinkBwRequest req);
  std::uint64_t demand(NodeId sfu) const;

  TamapPlan next(SimTime cycle_start);

  /// Transmit window of `sfu` inside the OMCI entry: [start, start + len].
  struct Window {
    SimTime start;
    Duration len;
  };
  std::optional<Window> omci_window(const frames::Tamap& tamap, NodeId sfu) const;

  const DbaParams& params() const { return params_; }
  const std::vector<NodeId>& sfus() const { return sfus_; }

 private:
  DbaParams params_;
  std::vector<NodeId> sfus_;
  std::map<NodeId, std::uint64_t> demand_;
  std::vector<UplinkBwRequest> pins_;
};

}  // namespace fttr::scheduling
