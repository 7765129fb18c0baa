// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "fttr/links/wifi.h"
#include "fttr/sim/simulator.h"

namespace fttr::links {

struct CellStats {
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;             // contended transmissions that overlapped a neighbour
  std::uint64_t coordination_failures = 0;  // granted transmissions that overlapped a neighbour
  std::uint64_t retry_drops = 0;            // bursts abandoned after retry_limit
  std::uint64_t bytes_sent = 0;             // every attempt
  std::uint64_t bytes_delivered = 0;
  std::uint64_t bytes_lost = 0;  // attempts that did not get through
  Duration busy{0};
};

/// Owner side of a contended cell. begin_burst() freezes the next aggregate
/// and returns its byte count (0 = nothing to send); end_burst() reports the
/// outcome of that same aggregate.
struct Contender {
  std::function<std::size_t()> begin_burst;
  /// delivered: success. abandoned: retry limit hit, aggregate discarded.
  std::function<void(bool delivered, bool abandoned)> end_burst;
};

/// Shared Wi-Fi medium across cells. Cells only hear neighbours in the
/// interference graph. Contended cells run DCF; granted transmissions seize
/// the medium without sensing.
class AirChannel {
 public:
  AirChannel(sim::Simulator& sim, InterferenceGraph graph);

  void add_cell(NodeId cell, WifiParams params);
  const WifiParams& params(NodeId cell) const { return cells_.at(cell).p; }
  const InterferenceGraph& graph() const { return graph_; }

  /// Enables DCF for the cell. kick() starts contention when data is queued.
  void set_contender(NodeId cell, Contender c);
  void kick(NodeId cell);

  /// Transmits immediately. `done(ok)` fires at the end of the airtime.
  Duration transmit_granted(NodeId cell, std::size_t bytes, std::function<void(bool ok)> done);

  bool transmitting(NodeId cell) const { return cells_.at(cell).tx_active; }
  /// Transmitting and not ending at this instant; transmit_granted() would throw.
  bool occupied(NodeId cell) const { return on_air(cells_.at(cell)); }
  /// True while any neighbour of `cell` occupies the medium.
  bool medium_busy(NodeId cell) const;

  const CellStats& stats(NodeId cell) const { return cells_.at(cell).stats; }
  CellStats totals() const;
  std::uint32_t contention_window(NodeId cell) const { return cells_.at(cell).cw; }
  /// Bytes of transmissions still on the air.
  std::uint64_t in_flight_bytes() const;

 private:
  enum class Dcf { Idle, Deferring, Countdown, Transmitting };

  struct Cell {
    WifiParams p;
    bool contender = false;
    Contender hooks;
    Dcf state = Dcf::Idle;
    std::uint32_t cw = 0;
    std::uint32_t retries = 0;
    std::uint64_t backoff = 0;
    SimTime countdown_start{};
    SimTime attempt_at{};
    sim::EventId attempt_event{};

    bool tx_active = false;
    bool tx_granted = false;
    bool tx_overlapped = false;
    std::size_t tx_bytes = 0;
    SimTime tx_start{};
    SimTime tx_end{};
    std::function<void(bool)> granted_done;
    sim::EventId end_event{};

    CellStats stats;
  };

  void try_countdown(NodeId id, Cell& c);
  void attempt(NodeId id);
  void start_tx(NodeId id, Cell& c, std::size_t bytes, bool granted);
  void end_tx(NodeId id);
  bool on_air(const Cell& c) const { return c.tx_active && c.tx_end > sim_.now(); }
  void on_neighbor_busy(Cell& c);
  void on_neighbor_idle(NodeId id, Cell& c);

  sim::Simulator& sim_;
  InterferenceGraph graph_;
  std::map<NodeId, Cell> cells_;
};

}  // namespace fttr::links
