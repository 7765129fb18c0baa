// SPDX-License-Identifier: Apache-2.0
#include "fttr/links/air_channel.h"

#include <algorithm>
#include <stdexcept>

namespace fttr::links {

AirChannel::AirChannel(sim::Simulator& sim, InterferenceGraph graph) : sim_{sim}, graph_{std::move(graph)} {}

void AirChannel::add_cell(NodeId cell, WifiParams params) {
  if (auto why = wifi_params_violation(params)) throw std::invalid_argument{*why};
  Cell c;
  c.p = params;
  c.cw = params.cw_min;
  cells_[cell] = std::move(c);
  graph_.add_cell(cell);
}

void AirChannel::set_contender(NodeId cell, Contender hooks) {
  Cell& c = cells_.at(cell);
  c.contender = true;
  c.hooks = std::move(hooks);
}

bool AirChannel::medium_busy(NodeId cell) const {
  for (NodeId n : graph_.neighbors(cell)) {
    auto it = cells_.find(n);
    if (it != cells_.end() && on_air(it->second)) return true;
  }
  return false;
}

std::uint64_t AirChannel::in_flight_bytes() const {
  std::uint64_t n = 0;
  for (const auto& [id, c] : cells_)
    if (c.tx_active) n += c.tx_bytes;
  return n;
}

CellStats AirChannel::totals() const {
  CellStats t;
  for (const auto& [id, c] : cells_) {
    t.attempts += c.stats.attempts;
    t.successes += c.stats.successes;
    t.collisions += c.stats.collisions;
    t.coordination_failures += c.stats.coordination_failures;
    t.retry_drops += c.stats.retry_drops;
    t.bytes_sent += c.stats.bytes_sent;
    t.bytes_delivered += c.stats.bytes_delivered;
    t.bytes_lost += c.stats.bytes_lost;
    t.busy += c.stats.busy;
  }
  return t;
}

void AirChannel::kick(NodeId cell) {
  Cell& c = cells_.at(cell);
  if (!c.contender || c.state != Dcf::Idle || c.tx_active) return;
  c.backoff = sim_.rng(cell).uniform(0, c.cw);
  c.state = Dcf::Deferring;
  try_countdown(cell, c);
}

void AirChannel::try_countdown(NodeId id, Cell& c) {
  if (medium_busy(id)) return;
  c.state = Dcf::Countdown;
  c.countdown_start = sim_.now();
  c.attempt_at = sim_.now() + c.p.difs + c.p.slot * static_cast<std::int64_t>(c.backoff);
  c.attempt_event = sim_.schedule(c.attempt_at, id, sim::EventKind::TimerExpiry, [this, id] { attempt(id); });
}

void AirChannel::on_neighbor_busy(Cell& c) {
  // A station due to fire in this same instant has already committed.
  if (c.state != Dcf::Countdown || c.attempt_at == sim_.now()) return;
  const Duration elapsed = sim_.now() - c.countdown_start;
  if (elapsed > c.p.difs) {
    const auto consumed = static_cast<std::uint64_t>((elapsed - c.p.difs) / c.p.slot);
    c.backoff -= std::min(consumed, c.backoff);
  }
  sim_.cancel(c.attempt_event);
  c.state = Dcf::Deferring;
}

void AirChannel::on_neighbor_idle(NodeId id, Cell& c) {
  if (c.state == Dcf::Deferring) try_countdown(id, c);
}

void AirChannel::attempt(NodeId id) {
  Cell& c = cells_.at(id);
  const std::size_t bytes = std::min(c.hooks.begin_burst ? c.hooks.begin_burst() : 0, c.p.max_aggregate_bytes);
  if (bytes == 0) {
    c.state = Dcf::Idle;
    return;
  }
  c.state = Dcf::Transmitting;
  start_tx(id, c, bytes, false);
}

void AirChannel::start_tx(NodeId id, Cell& c, std::size_t bytes, bool granted) {
  c.tx_active = true;
  c.tx_granted = granted;
  c.tx_overlapped = false;
  c.tx_bytes = bytes;
  c.tx_start = sim_.now();
  c.tx_end = sim_.now() + airtime(c.p, bytes);
  ++c.stats.attempts;
  c.stats.bytes_sent += bytes;

  for (NodeId n : graph_.neighbors(id)) {
    auto it = cells_.find(n);
    if (it == cells_.end()) continue;
    Cell& other = it->second;
    if (on_air(other)) {
      other.tx_overlapped = true;
      c.tx_overlapped = true;
    } else {
      on_neighbor_busy(other);
    }
  }
  c.end_event = sim_.schedule(c.tx_end, id, sim::EventKind::TimerExpiry, [this, id] { end_tx(id); });
}

Duration AirChannel::transmit_granted(NodeId cell, std::size_t bytes, std::function<void(bool ok)> done) {
  Cell& c = cells_.at(cell);
  if (c.tx_active && c.tx_end == sim_.now()) {
    // Back-to-back grant: close the previous burst first.
    sim_.cancel(c.end_event);
    end_tx(cell);
  }
  if (c.tx_active) throw std::logic_error{"granted transmission while the cell is already transmitting"};
  if (c.state == Dcf::Countdown) {
    sim_.cancel(c.attempt_event);
    c.state = Dcf::Deferring;
  }
  c.granted_done = std::move(done);
  start_tx(cell, c, bytes, true);
  return c.tx_end - c.tx_start;
}

void AirChannel::end_tx(NodeId id) {
  Cell& c = cells_.at(id);
  c.tx_active = false;
  c.stats.busy += c.tx_end - c.tx_start;
  const bool ok = !c.tx_overlapped;
  if (ok) {
    ++c.stats.successes;
    c.stats.bytes_delivered += c.tx_bytes;
  } else {
    c.stats.bytes_lost += c.tx_bytes;
    if (c.tx_granted)
      ++c.stats.coordination_failures;
    else
      ++c.stats.collisions;
  }

  for (NodeId n : graph_.neighbors(id)) {
    auto it = cells_.find(n);
    if (it != cells_.end() && !medium_busy(n)) on_neighbor_idle(n, it->second);
  }

  if (c.tx_granted) {
    auto done = std::move(c.granted_done);
    c.granted_done = nullptr;
    if (c.state == Dcf::Deferring) try_countdown(id, c);
    if (done) done(ok);
    return;
  }

  bool abandoned = false;
  if (ok) {
    c.cw = c.p.cw_min;
    c.retries = 0;
  } else if (++c.retries > c.p.retry_limit) {
    ++c.stats.retry_drops;
    abandoned = true;
    c.cw = c.p.cw_min;
    c.retries = 0;
  } else {
    c.cw = std::min(2 * c.cw + 1, c.p.cw_max);
  }
  c.state = Dcf::Idle;
  if (c.hooks.end_burst) c.hooks.end_burst(ok, abandoned);
  kick(id);
}

}  // namespace fttr::links
