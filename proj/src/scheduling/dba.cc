// SPDX-License-Identifier: Apache-2.0
#include "fttr/scheduling/dba.h"

#include <algorithm>
#include <stdexcept>

#include "fttr/frames/pma.h"

namespace fttr::scheduling {
namespace {

/// Occupied [begin, end) intervals of one cycle, offsets from cycle start.
class Occupancy {
 public:
  explicit Occupancy(Duration cycle) : cycle_{cycle} {}

  /// Earliest offset >= from where `len` fits, if any.
  std::optional<Duration> first_fit(Duration from, Duration len) const {
    Duration at = from;
    for (const auto& [b, e] : busy_) {
      if (at + len <= b) break;
      if (e > at) at = e;
    }
    if (at + len > cycle_) return std::nullopt;
    return at;
  }

  /// Longest free stretch starting at or after 0.
  std::pair<Duration, Duration> largest_gap() const {
    Duration best_at{0}, best_len{0}, at{0};
    for (const auto& [b, e] : busy_) {
      if (b - at > best_len) best_at = at, best_len = b - at;
      at = std::max(at, e);
    }
    if (cycle_ - at > best_len) best_at = at, best_len = cycle_ - at;
    return {best_at, best_len};
  }

  void take(Duration at, Duration len) {
    busy_.emplace_back(at, at + len);
    std::sort(busy_.begin(), busy_.end());
  }

  Duration free_time() const {
    Duration used{0};
    for (const auto& [b, e] : busy_) used += e - b;
    return cycle_ - used;
  }

 private:
  Duration cycle_;
  std::vector<std::pair<Duration, Duration>> busy_;
};

}  // namespace

Duration burst_time(DataRate up, std::uint64_t payload_bytes) {
  return up.transmit_time(frames::pma_encoded_size(frames::pcs_header_size(0, 0) + payload_bytes));
}

std::uint64_t burst_payload_capacity(DataRate up, Duration slot) {
  const std::uint64_t wire = up.bytes_in(slot);
  const std::size_t header = frames::pcs_header_size(0, 0);
  // pma_encoded_size is monotone; walk down from the parity-free bound.
  std::uint64_t n = wire * frames::kFecDataBytes / frames::kFecBlockBytes + 1;
  while (n > 0 && (frames::pma_encoded_size(n) > wire || up.transmit_time(frames::pma_encoded_size(n)) > slot)) --n;
  return n > header ? n - header : 0;
}

TamapPlan generate_tamap(std::span<const UplinkBwRequest> requests, std::size_t n_sfus, SimTime cycle_start,
                         const DbaParams& p) {
  if (p.cycle <= p.guard + p.omci_subslot * static_cast<std::int64_t>(n_sfus))
    throw std::invalid_argument{"allocation cycle too short for the OMCI entry"};

  TamapPlan plan;
  plan.tamap.cycle_start = cycle_start;
  plan.tamap.cycle_length = p.cycle;
  Occupancy occ{p.cycle};
  const SimTime cycle_end = cycle_start + p.cycle;

  struct Placed {
    frames::TamapEntry entry;
    SlotAssignment slot;
  };
  std::vector<Placed> data;

  // Pinned slots first, at their ready time.
  for (const UplinkBwRequest& r : requests) {
    if (!r.ready_at || r.bytes_expected == 0) continue;
    if (*r.ready_at >= cycle_end) {
      plan.deferred_pins.push_back(r);
      continue;
    }
    const Duration from = std::max(Duration{0}, *r.ready_at - cycle_start);
    const Duration dur = burst_time(p.upstream, r.bytes_expected);
    auto at = occ.first_fit(from, dur + p.guard);
    if (!at) {
      UplinkBwRequest later = r;
      later.ready_at = std::max(*r.ready_at, cycle_end);
      plan.deferred_pins.push_back(later);
      continue;
    }
    occ.take(*at, dur + p.guard);
    data.push_back({{r.sfu, *at, dur, r.tcont}, {r.sfu, r.bytes_expected, true}});
  }

  if (n_sfus > 0) {
    const Duration omci = p.omci_subslot * static_cast<std::int64_t>(n_sfus);
    auto at = occ.first_fit(Duration{0}, omci + p.guard);
    if (!at) throw std::logic_error{"pinned slots left no room for the OMCI entry"};
    occ.take(*at, omci + p.guard);
    plan.tamap.entries.push_back({kBroadcast, *at, omci, frames::kOmciTcont});
  }

  std::vector<const UplinkBwRequest*> regular;
  for (const UplinkBwRequest& r : requests)
    if (!r.ready_at && r.bytes_expected > 0) regular.push_back(&r);
  std::sort(regular.begin(), regular.end(), [](auto* a, auto* b) { return a->sfu < b->sfu; });

  std::vector<Duration> base(regular.size());
  Duration base_total{0};
  unsigned __int128 weight_total = 0;
  for (std::size_t i = 0; i < regular.size(); ++i) {
    base[i] = burst_time(p.upstream, std::min(regular[i]->bytes_expected, p.min_slot_bytes));
    base_total += base[i] + p.guard;
    weight_total += regular[i]->bytes_expected;
  }
  const Duration residual = std::max(Duration{0}, occ.free_time() - base_total);

  for (std::size_t i = 0; i < regular.size(); ++i) {
    const UplinkBwRequest& r = *regular[i];
    const auto share = static_cast<std::int64_t>(static_cast<unsigned __int128>(residual.count()) * r.bytes_expected /
                                                 weight_total);
    const Duration extra = std::min(p.upstream.transmit_time(r.bytes_expected), Duration{share});
    Duration dur = base[i] + extra;
    auto at = occ.first_fit(Duration{0}, dur + p.guard);
    if (!at) {
      const auto [gap_at, gap_len] = occ.largest_gap();
      if (gap_len <= p.guard + burst_time(p.upstream, 0)) continue;
      at = gap_at;
      dur = gap_len - p.guard;
    }
    occ.take(*at, dur + p.guard);
    const std::uint64_t cap = std::min(burst_payload_capacity(p.upstream, dur), r.bytes_expected);
    data.push_back({{r.sfu, *at, dur, r.tcont}, {r.sfu, cap, false}});
  }

  std::sort(data.begin(), data.end(), [](const Placed& a, const Placed& b) { return a.entry.offset < b.entry.offset; });
  for (const Placed& d : data) {
    plan.tamap.entries.push_back(d.entry);
    plan.slots.push_back(d.slot);
  }
  return plan;
}

std::optional<std::string> tamap_schedule_violation(const frames::Tamap& tamap, Duration guard) {
  if (auto why = frames::tamap_violation(tamap)) return why;
  std::vector<frames::TamapEntry> e = tamap.entries;
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.offset < b.offset; });
  Duration total{0};
  for (std::size_t i = 0; i < e.size(); ++i) {
    total += e[i].duration + guard;
    const Duration next = i + 1 < e.size() ? e[i + 1].offset : tamap.cycle_length;
    if (e[i].end_offset() + guard > next)
      return "entry at offset " + std::to_string(e[i].offset.count()) + " lacks its guard time";
  }
  if (total > tamap.cycle_length) return "entries and guards exceed the cycle";
  return std::nullopt;
}

DbaAllocator::DbaAllocator(DbaParams params, std::vector<NodeId> sfus) : params_{params}, sfus_{std::move(sfus)} {
  std::sort(sfus_.begin(), sfus_.end());
}

void DbaAllocator::add_demand(NodeId sfu, std::uint64_t bytes) { demand_[sfu] += bytes; }

void DbaAllocator::pin(UplinkBwRequest req) {
  if (!req.ready_at) throw std::invalid_argument{"pinned request without ready time"};
  if (req.bytes_expected > 0) pins_.push_back(req);
}

std::uint64_t DbaAllocator::demand(NodeId sfu) const {
  auto it = demand_.find(sfu);
  return it == demand_.end() ? 0 : it->second;
}

TamapPlan DbaAllocator::next(SimTime cycle_start) {
  std::vector<UplinkBwRequest> reqs = pins_;
  for (const auto& [sfu, bytes] : demand_)
    if (bytes > 0) reqs.push_back({sfu, bytes, frames::kDataTcont, std::nullopt});
  TamapPlan plan = generate_tamap(reqs, sfus_.size(), cycle_start, params_);
  pins_ = plan.deferred_pins;
  for (const SlotAssignment& s : plan.slots) {
    if (s.pinned) continue;
    auto& d = demand_[s.sfu];
    d -= std::min(d, s.bytes_granted);
  }
  return plan;
}

std::optional<DbaAllocator::Window> DbaAllocator::omci_window(const frames::Tamap& tamap, NodeId sfu) const {
  auto pos = std::lower_bound(sfus_.begin(), sfus_.end(), sfu);
  if (pos == sfus_.end() || *pos != sfu) return std::nullopt;
  for (const auto& e : tamap.entries) {
    if (e.tcont != frames::kOmciTcont) continue;
    const auto k = static_cast<std::int64_t>(pos - sfus_.begin());
    return Window{e.start(tamap.cycle_start) + params_.omci_subslot * k, params_.omci_subslot - params_.guard};
  }
  return std::nullopt;
}

}  // namespace fttr::scheduling
