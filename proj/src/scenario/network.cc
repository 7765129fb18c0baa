// SPDX-License-Identifier: Apache-2.0
#include "fttr/scenario/network.h"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fttr/energy/sfu_power.h"
#include "fttr/frames/drr.h"
#include "fttr/frames/fem.h"
#include "fttr/frames/pma.h"
#include "fttr/links/air_channel.h"
#include "fttr/links/optical.h"
#include "fttr/management/adapter.h"
#include "fttr/scenario/traffic.h"
#include "fttr/scheduling/dba.h"
#include "fttr/scheduling/grants.h"
#include "fttr/scheduling/status.h"
#include "fttr/scheduling/uplink.h"
#include "fttr/sim/simulator.h"

namespace fttr::scenario {
namespace {

using energy::PowerState;
using scheduling::SchedulerMode;
using sim::EventKind;

constexpr std::uint32_t kNoFlow = UINT32_MAX;
/// 802.11 MAC header + FCS carried per MSDU on the air.
constexpr std::size_t kWifiMacOverhead = 34;
constexpr std::size_t kFem = frames::kFemHeaderBytes;
constexpr std::size_t kDataFemOverhead = kFem + frames::kApduHeaderBytes;
/// FMCI-DU payloads on the OMCI sub-slot.
constexpr std::size_t kBacklogReportBytes = kFem + 12;  // backlog(8) map seq(4)
constexpr std::size_t kStatusReportBytes = kFem + 16;   // bytes(8) prio(1) users(2) ts(5)
constexpr std::size_t kPowerReportBytes = kFem + 2;     // state(1) policy(1)
constexpr std::size_t kRecentMaps = 32;

enum class Loss { QueueOverflow, Air, SleepBuffer, SleepReceiver, LinkDown, SfuDown, RelayOverflow, Upstream };

struct Packet {
  std::uint32_t flow = kNoFlow;  // index into the flow table
  NodeId sfu{};
  std::uint32_t payload = 0;
  std::uint32_t wire = 0;  // optical bytes, FEM header included
  std::uint8_t priority = 0;
  frames::ServiceClass service = frames::ServiceClass::Background;
  frames::ClassificationTag tag = 0;
  SimTime created{};
  SimTime ready{};
  bool pinned = false;  // OFDMA round forwarded in a pre-granted slot
  std::shared_ptr<const frames::Bytes> omci;
};

std::size_t air_bytes(const Packet& p) { return p.payload + kWifiMacOverhead; }

void insert_by_ready(std::deque<Packet>& q, Packet p) {
  auto it = std::upper_bound(q.begin(), q.end(), p.ready, [](SimTime t, const Packet& x) { return t < x.ready; });
  q.insert(it, std::move(p));
}

struct ControlItem {
  enum Kind { Backlog, Status, Power, Omci } kind = Backlog;
  std::uint64_t backlog = 0;
  std::uint64_t map_seen = 0;
  scheduling::SfuStatusReport status;
  energy::SleepReport power;
  frames::Bytes omci;
  SimTime ready{};
};

struct DataSlot {
  SimTime start{};
  Duration len{};
  std::uint64_t bytes = 0;
  bool pinned = false;
};

struct Delivery {
  NodeId sfu{};
  std::uint64_t map_seq = 0;
  std::vector<frames::PloamMsg> ploams;
  std::optional<scheduling::DbaAllocator::Window> omci;
  std::vector<DataSlot> slots;
  std::vector<Packet> pkts;
};

struct UpTransit {
  std::uint64_t burst = 0;
  NodeId sfu{};
  std::vector<Packet> pkts;
  std::vector<ControlItem> items;
};

struct FlowState {
  FlowMetrics m;
  std::vector<std::int64_t> latency;
  std::vector<std::int64_t> forwarding;
  std::uint64_t unadmitted_frames = 0, unadmitted_bytes = 0;
};

struct SfuNode {
  NodeId id{};
  SfuSpec spec;
  Duration eq{0};  // ranging equalization: bursts are held so all arrive as if at max distance
  bool dead = false;
  std::unique_ptr<energy::SfuPowerMachine> power;
  energy::FeatureTracker features{kTimeZero, false};
  management::MibStore mib{NodeId{}};

  std::deque<Packet> wifi_q;
  std::uint64_t wifi_bytes = 0;  // air bytes queued
  std::array<std::uint32_t, 8> prio_count{};
  std::vector<Packet> frozen;  // contended aggregate under transmission / retry
  std::vector<Packet> on_air;  // granted aggregate
  std::vector<Packet> trigger_air;
  std::uint64_t reserved = 0;  // queued air bytes already covered by pending grants
  SimTime kick_at = kTimeNever;

  std::deque<Packet> up_q;
  std::deque<Packet> ofdma_q;
  std::uint64_t up_bytes = 0;  // both queues, wire bytes
  std::uint64_t known_grants = 0;
  std::uint64_t map_seen = 0;

  std::deque<ControlItem> omci_out;
  SimTime next_status = kTimeZero;
  bool power_dirty = false;
  energy::SleepReport reported{PowerState::Active, energy::EnergyPolicy::LightSleepPolicy};
  SimTime timer_at = kTimeNever;
  std::vector<std::size_t> sources;  // uplink/local flow indices
};

links::InterferenceGraph make_graph(const ScenarioConfig& cfg) {
  links::InterferenceGraph g;
  for (const SfuSpec& s : cfg.sfus) g.add_cell(s.id);
  for (const auto& [a, b] : cfg.conflicts) g.add_conflict(a, b);
  return g;
}

std::vector<NodeId> sfu_ids(const ScenarioConfig& cfg) {
  std::vector<NodeId> ids;
  for (const SfuSpec& s : cfg.sfus) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

scheduling::DbaParams dba_params(const ScenarioConfig& cfg) {
  scheduling::DbaParams p = cfg.dba;
  p.upstream = cfg.optical_up;
  return p;
}

}  // namespace

struct FttrNetwork::Impl {
  ScenarioConfig cfg;
  Duration cycle;
  bool grants_mode;
  sim::Simulator sim;
  links::InterferenceGraph graph;
  links::AirChannel air;
  links::OpticalLink optical;
  energy::EnergyLedger ledger;
  management::AlarmLog alarms;
  management::LivenessMonitor liveness;
  management::OmciAdapter adapter;
  scheduling::DbaAllocator dba;
  scheduling::StatusCollector collector;
  std::optional<scheduling::GrantPlanner> planner;
  frames::DeficitRoundRobin<Packet> drr;

  std::map<NodeId, SfuNode> sfus;
  std::vector<FlowState> flows;
  std::map<std::uint32_t, std::size_t> flow_index;
  std::vector<TrafficSource> sources;
  std::vector<std::size_t> downlink_sources;
  std::vector<Arrival> scratch;

  // MFU
  std::deque<Packet> staging;
  std::map<NodeId, energy::SleepBuffer<Packet>> sleep_bufs;
  std::set<NodeId> believed_asleep;
  std::set<NodeId> wake_wanted;
  std::map<NodeId, energy::SleepReport> last_reports;
  bool deep_cmd_sent = false;
  std::uint64_t map_seq = 0;
  std::deque<std::pair<std::uint64_t, std::map<NodeId, std::uint64_t>>> recent_maps;
  std::map<NodeId, SimTime> last_planned;
  std::deque<scheduling::AirGrant> live_grants;
  std::size_t mpdu_limit = 0;
  PowerState mfu_state = PowerState::Active;
  SimTime mfu_last = kTimeZero;
  bool mfu_timer = false;

  std::uint64_t next_transit = 1;
  std::map<std::uint64_t, Delivery> down_transit;
  std::map<std::uint64_t, UpTransit> up_transit;

  // observers and logs
  std::vector<std::function<void(const frames::Tamap&)>> tamap_obs;
  std::vector<std::function<void(const scheduling::AirGrant&)>> grant_obs;
  bool log_schedule = false;
  std::vector<std::string> schedule;
  std::vector<frames::OmciMessage> omci_requests;
  std::vector<PowerReport> power_reports;
  std::vector<SimTime> deep_cmds;

  RunMetrics out;
  bool ran = false;

  explicit Impl(const ScenarioConfig& c)
      : cfg{c},
        cycle{c.dba.cycle},
        grants_mode{scheduling::uses_air_grants(c.mode)},
        sim{c.seed},
        graph{make_graph(c)},
        air{sim, graph},
        optical{c.optical_down, c.optical_up},
        liveness{c.management.k_miss, alarms},
        adapter{c.management.mfu_port},
        dba{dba_params(c), sfu_ids(c)},
        collector{c.status_cycle},
        drr{frames::kTagCount, frames::kDefaultQuantumBytes, [](const Packet& p) { return std::size_t{p.wire}; },
            frames::kControlTagBase} {
    build();
  }

  // ---- setup ----

  void build() {
    Duration dmax{0};
    for (const SfuSpec& s : cfg.sfus) dmax = std::max(dmax, s.prop_delay);
    const auto& prof = cfg.energy.profile;
    ledger.add_node(kMfuNode, energy::NodeType::Mfu, PowerState::Active, prof.mfu[PowerState::Active], kTimeZero);

    for (const SfuSpec& s : cfg.sfus) {
      SfuNode& n = sfus[s.id];
      n.id = s.id;
      n.spec = s;
      n.eq = dmax - s.prop_delay;
      n.power = std::make_unique<energy::SfuPowerMachine>(s.id, cfg.energy.profile, s.iot_resident,
                                                          cfg.energy.savings, ledger, kTimeZero);
      n.features = energy::FeatureTracker{kTimeZero, s.iot_resident};
      n.mib = management::MibStore{s.id};
      optical.attach(s.id, s.prop_delay);
      air.add_cell(s.id, cfg.wifi);
      adapter.register_sfu(static_cast<std::uint8_t>(to_underlying(s.id)), s.id);
      liveness.track(s.id);
      sleep_bufs.emplace(s.id, energy::SleepBuffer<Packet>{cfg.energy.sleep_buffer_bytes,
                                                           [](const Packet& p) { return std::size_t{p.wire}; }});
      if (!grants_mode) {
        const NodeId id = s.id;
        air.set_contender(id, {[this, id] { return begin_burst(sfus.at(id)); },
                               [this, id](bool ok, bool abandoned) { end_burst(sfus.at(id), ok, abandoned); }});
      }
    }

    if (grants_mode) {
      scheduling::GrantParams gp;
      gp.txop_max = cfg.txop_max;
      gp.lookahead = cfg.status_cycle;
      const links::WifiParams wp = cfg.wifi;
      gp.needed_airtime = [wp](NodeId, std::uint64_t bytes) { return scheduling::drain_airtime(wp, bytes); };
      planner.emplace(graph, gp);
    }

    // Largest MPDU + header whose PMA encoding fits one cycle of the downstream line.
    const std::uint64_t cap = cfg.optical_down.bytes_in(cycle);
    std::size_t n = cap * frames::kFecDataBytes / frames::kFecBlockBytes + 1;
    while (n > 0 && frames::pma_encoded_size(n) > cap) --n;
    mpdu_limit = n;

    for (const FlowSpec& f : cfg.flows) {
      FlowState st;
      st.m.id = f.id;
      st.m.direction = f.direction;
      st.m.sfu = f.sfu;
      st.m.service = f.service;
      st.m.priority = f.priority;
      flow_index[f.id] = flows.size();
      flows.push_back(std::move(st));
      sources.emplace_back(f, cfg.seed);
      if (f.direction == Direction::Downlink)
        downlink_sources.push_back(sources.size() - 1);
      else
        sfus.at(f.sfu).sources.push_back(sources.size() - 1);
    }
    for (const OfdmaSpec& o : cfg.ofdma) {
      FlowState st;
      st.m.id = o.flow;
      st.m.direction = Direction::Uplink;
      st.m.sfu = o.sfu;
      st.m.service = o.service;
      st.m.priority = o.priority;
      st.m.ofdma = true;
      flow_index[o.flow] = flows.size();
      flows.push_back(std::move(st));
    }

    const SimTime horizon = kTimeZero + cfg.horizon;
    sim.schedule(kTimeZero, kMfuNode, EventKind::TimerExpiry, [this] { tick(); });
    arm_mfu_timer(kTimeZero + cfg.energy.profile.t_act_idle);
    for (auto& [id, n] : sfus) arm_sfu_timer(n);

    if (grants_mode && cfg.status_cycle <= cfg.horizon)
      sim.schedule(kTimeZero + cfg.status_cycle, kMfuNode, EventKind::TimerExpiry, [this] { plan_grants(); });

    for (std::size_t i = 0; i < cfg.ofdma.size(); ++i) schedule_ofdma_plan(i, cfg.ofdma[i].start);

    const OmciLoadSpec& req = cfg.management.requests;
    if (req.count > 0 && req.start <= horizon)
      sim.schedule(req.start, kOltNode, EventKind::TimerExpiry, [this] { olt_request(0); });

    if (cfg.management.poll <= cfg.horizon)
      sim.schedule(kTimeZero + cfg.management.poll, kMfuNode, EventKind::TimerExpiry, [this] { poll(); });

    if (cfg.energy.policy_window <= cfg.horizon)
      for (auto& [id, n] : sfus) {
        const NodeId sid = id;
        sim.schedule(kTimeZero + cfg.energy.policy_window, sid, EventKind::TimerExpiry,
                     [this, sid] { policy_window(sfus.at(sid)); });
      }

    for (const FaultEvent& e : cfg.events)
      if (e.at <= horizon) sim.schedule(e.at, fault_target(e), EventKind::TimerExpiry, [this, e] { fault(e); });
  }

  NodeId fault_target(const FaultEvent& e) const {
    return e.kind == FaultKind::KillSfu || e.kind == FaultKind::ReviveSfu ? e.sfu : kMfuNode;
  }

  SimTime horizon() const { return kTimeZero + cfg.horizon; }

  void breach(const std::string& name, const std::string& detail) { throw InvariantBreach{name, detail}; }

  // ---- accounting ----

  void offer(FlowState& f, std::uint32_t bytes) {
    ++f.m.offered_frames;
    f.m.offered_bytes += bytes;
  }

  void deliver(const Packet& p, SimTime at) {
    if (p.flow == kNoFlow) return;
    FlowState& f = flows[p.flow];
    ++f.m.delivered_frames;
    f.m.delivered_bytes += p.payload;
    f.latency.push_back(to_ns(at) - to_ns(p.created));
  }

  void lose(const Packet& p, Loss why) {
    auto& l = out.losses;
    switch (why) {
      case Loss::QueueOverflow: ++l.queue_overflow; break;
      case Loss::Air: ++l.air; break;
      case Loss::SleepBuffer: ++l.sleep_buffer; break;
      case Loss::SleepReceiver: ++l.sleep_receiver; break;
      case Loss::LinkDown: ++l.link_down; break;
      case Loss::SfuDown: ++l.sfu_down; break;
      case Loss::RelayOverflow: ++l.relay_overflow; break;
      case Loss::Upstream: ++l.upstream; break;
    }
    if (p.flow == kNoFlow) {
      if (p.omci) ++out.management.failed;
      return;
    }
    FlowState& f = flows[p.flow];
    ++f.m.lost_frames;
    f.m.lost_bytes += p.payload;
  }

  void lose_all(std::vector<Packet>& v, Loss why) {
    for (const Packet& p : v) lose(p, why);
    v.clear();
  }
  void lose_all(std::deque<Packet>& v, Loss why) {
    for (const Packet& p : v) lose(p, why);
    v.clear();
  }

  void sched_log(std::string line) {
    if (log_schedule) schedule.push_back(std::move(line));
  }

  // ---- MFU allocation cycle ----

  Packet make_packet(std::size_t flow_idx, const FlowSpec& spec, const Arrival& a) {
    Packet p;
    p.flow = static_cast<std::uint32_t>(flow_idx);
    p.sfu = spec.sfu;
    p.payload = a.size;
    p.priority = spec.priority;
    p.service = spec.service;
    p.tag = frames::classification_tag(spec.priority, spec.service);
    p.created = a.at;
    return p;
  }

  std::uint32_t downstream_wire(std::uint32_t payload) const {
    if (cfg.mode == SchedulerMode::MacIntegrated || cfg.mode == SchedulerMode::PhyRelay)
      return static_cast<std::uint32_t>(kFem + kWifiMacOverhead + payload);
    return static_cast<std::uint32_t>(kDataFemOverhead + payload);
  }

  void pull_sources(SimTime now) {
    for (std::size_t si : downlink_sources) {
      TrafficSource& src = sources[si];
      scratch.clear();
      src.pull(now, scratch);
      const std::size_t fi = flow_index.at(src.spec().id);
      for (const Arrival& a : scratch) {
        offer(flows[fi], a.size);
        Packet p = make_packet(fi, src.spec(), a);
        p.wire = downstream_wire(a.size);
        p.ready = a.at + cfg.latencies.mfu;
        insert_by_ready(staging, std::move(p));
      }
    }
    for (auto& [id, n] : sfus) {
      for (std::size_t si : n.sources) {
        TrafficSource& src = sources[si];
        scratch.clear();
        src.pull(now, scratch);
        if (scratch.empty()) continue;
        const std::size_t fi = flow_index.at(src.spec().id);
        for (const Arrival& a : scratch) {
          offer(flows[fi], a.size);
          Packet p = make_packet(fi, src.spec(), a);
          if (n.dead) {
            lose(p, Loss::SfuDown);
            continue;
          }
          p.ready = a.at + cfg.latencies.sfu;
          n.features.wireless(a.size, now, p.service);
          if (src.spec().direction == Direction::Local) {
            p.wire = static_cast<std::uint32_t>(air_bytes(p));
            wifi_enqueue(n, std::move(p));
          } else {
            n.features.optical(a.size, now, p.service);
            upstream_enqueue(n, std::move(p), false);
          }
        }
        sfu_activity(n);
        if (!grants_mode) wifi_wakeup(n);
      }
    }
  }

  std::uint32_t upstream_wire(std::uint32_t payload) const {
    if (cfg.mode == SchedulerMode::PhyRelay) {
      const Duration on_air = cfg.wifi.air_rate.transmit_time(payload + kWifiMacOverhead) + cfg.wifi.preamble;
      return static_cast<std::uint32_t>(
          scheduling::phy_relay_bytes(on_air, cfg.phy_relay.sample_rate, cfg.phy_relay.bit_width));
    }
    return static_cast<std::uint32_t>(kDataFemOverhead + payload);
  }

  void upstream_enqueue(SfuNode& n, Packet p, bool to_ofdma_q) {
    p.wire = upstream_wire(p.payload);
    const bool relay = cfg.mode == SchedulerMode::PhyRelay;
    const std::uint64_t cap = relay ? cfg.phy_relay.buffer_bytes : cfg.upstream_queue_bytes;
    if (n.up_bytes + p.wire > cap) {
      if (relay) alarms.raise(n.id, management::AlarmKind::BufferOverflow, sim.now());
      lose(p, relay ? Loss::RelayOverflow : Loss::QueueOverflow);
      return;
    }
    n.up_bytes += p.wire;
    insert_by_ready(to_ofdma_q ? n.ofdma_q : n.up_q, std::move(p));
  }

  void admit(Packet p) {
    const NodeId sfu = p.sfu;
    if (believed_asleep.count(sfu) != 0 && p.omci == nullptr) {
      for (const Packet& e : sleep_bufs.at(sfu).push(std::move(p))) lose(e, Loss::SleepBuffer);
      wake_wanted.insert(sfu);
      return;
    }
    if (drr.queued_bytes() + p.wire > cfg.mfu_queue_bytes) {
      lose(p, Loss::QueueOverflow);
      return;
    }
    const std::size_t tag = p.tag;
    drr.push(tag, std::move(p));
  }

  void tick() {
    const SimTime now = sim.now();
    pull_sources(now);
    while (!staging.empty() && staging.front().ready <= now) {
      Packet p = std::move(staging.front());
      staging.pop_front();
      admit(std::move(p));
    }

    scheduling::TamapPlan plan = dba.next(now + 2 * cycle);
    if (auto why = scheduling::tamap_schedule_violation(plan.tamap, cfg.dba.guard)) breach("tamap feasibility", *why);
    ++out.scheduling.tamaps;
    out.scheduling.deferred_pins += plan.deferred_pins.size();
    for (const auto& s : plan.slots) out.scheduling.pinned_slots += s.pinned ? 1 : 0;
    for (auto& f : tamap_obs) f(plan.tamap);
    if (log_schedule)
      for (const auto& e : plan.tamap.entries) {
        std::ostringstream line;
        line << "TAMAP " << to_ns(plan.tamap.cycle_start) << ' '
             << (e.sfu == kBroadcast ? std::string{"omci"} : to_string(e.sfu)) << ' ' << e.offset.count() << ' '
             << e.duration.count() << ' ' << static_cast<unsigned>(e.tcont);
        schedule.push_back(line.str());
      }

    ++map_seq;
    std::map<NodeId, std::uint64_t> granted;
    for (const auto& s : plan.slots)
      if (!s.pinned) granted[s.sfu] += s.bytes_granted;
    recent_maps.emplace_back(map_seq, std::move(granted));
    if (recent_maps.size() > kRecentMaps) recent_maps.pop_front();

    std::vector<frames::PloamMsg> ploams;
    for (NodeId s : wake_wanted) {
      ploams.push_back({frames::PloamKind::WakeCommand, s, 0});
      ++out.energy.wake_commands;
    }
    if (cfg.energy.savings && !deep_cmd_sent && energy::deep_sleep_allowed(last_reports, sfus.size())) {
      ploams.push_back({frames::PloamKind::DeepSleepCommand, kBroadcast, 0});
      deep_cmd_sent = true;
      deep_cmds.push_back(now);
    }

    const std::size_t header = frames::pcs_header_size(ploams.size(), plan.tamap.entries.size());
    std::vector<Packet> pkts = drr.draw(mpdu_limit > header ? mpdu_limit - header : 0);
    std::size_t mpdu = 0;
    for (const Packet& p : pkts) mpdu += p.wire;
    if (!pkts.empty()) mfu_activity();
    const auto send = optical.send_downstream(now, frames::pma_encoded_size(header + mpdu));

    std::map<NodeId, std::vector<Packet>> by_sfu;
    for (Packet& p : pkts) by_sfu[p.sfu].push_back(std::move(p));

    std::size_t slot_i = 0;
    std::map<NodeId, std::vector<DataSlot>> data_slots;
    for (const auto& e : plan.tamap.entries) {
      if (e.sfu == kBroadcast) continue;
      const auto& s = plan.slots.at(slot_i++);
      data_slots[s.sfu].push_back({e.start(plan.tamap.cycle_start), e.duration, s.bytes_granted, s.pinned});
    }

    for (const auto& d : send.deliveries) {
      Delivery del;
      del.sfu = d.sfu;
      del.map_seq = map_seq;
      for (const auto& m : ploams)
        if (m.target_sfu == d.sfu || m.target_sfu == kBroadcast) del.ploams.push_back(m);
      del.omci = dba.omci_window(plan.tamap, d.sfu);
      if (auto it = data_slots.find(d.sfu); it != data_slots.end()) del.slots = it->second;
      if (auto it = by_sfu.find(d.sfu); it != by_sfu.end()) {
        del.pkts = std::move(it->second);
        by_sfu.erase(it);
      }
      const std::uint64_t id = next_transit++;
      down_transit.emplace(id, std::move(del));
      sim.schedule(d.at, d.sfu, EventKind::FrameArrival, [this, id] { sfu_receive(id); });
    }
    for (auto& [sfu, v] : by_sfu) lose_all(v, Loss::LinkDown);

    if (now + cycle <= horizon())
      sim.schedule(now + cycle, kMfuNode, EventKind::TimerExpiry, [this] { tick(); });
  }

  // ---- MFU power ----

  void mfu_activity() {
    mfu_last = sim.now();
    if (mfu_state != PowerState::Active) {
      mfu_state = PowerState::Active;
      ledger.enter(kMfuNode, PowerState::Active, cfg.energy.profile.mfu[PowerState::Active], sim.now());
      arm_mfu_timer(mfu_last + cfg.energy.profile.t_act_idle);
    }
  }

  void arm_mfu_timer(SimTime at) {
    if (mfu_timer || at > horizon()) return;
    mfu_timer = true;
    sim.schedule(at, kMfuNode, EventKind::StateDeadline, [this] {
      mfu_timer = false;
      const SimTime due = mfu_last + cfg.energy.profile.t_act_idle;
      if (sim.now() < due) {
        arm_mfu_timer(due);
        return;
      }
      mfu_state = PowerState::Idle;
      ledger.enter(kMfuNode, PowerState::Idle, cfg.energy.profile.mfu[PowerState::Idle], sim.now());
    });
  }

  // ---- SFU power ----

  void arm_sfu_timer(SfuNode& n) {
    const auto d = n.power->next_deadline();
    if (!d) return;
    const SimTime at = std::max(*d, sim.now());
    if (at > horizon() || (n.timer_at != kTimeNever && n.timer_at <= at && n.timer_at >= sim.now())) return;
    n.timer_at = at;
    const NodeId id = n.id;
    sim.schedule(at, id, EventKind::StateDeadline, [this, id, at] {
      SfuNode& s = sfus.at(id);
      if (s.timer_at != at) return;
      s.timer_at = kTimeNever;
      if (s.power->on_timer(sim.now())) note_power(s);
      arm_sfu_timer(s);
    });
  }

  void note_power(SfuNode& n) {
    const energy::SleepReport now{n.power->state(), n.power->policy()};
    if (now.state != n.reported.state || now.policy != n.reported.policy) n.power_dirty = true;
  }

  /// Traffic handled at the SFU now; returns false while it must wake first.
  bool sfu_activity(SfuNode& n) {
    if (energy::is_sleep(n.power->state())) {
      start_wake(n);
      return false;
    }
    if (n.power->activity(sim.now())) {
      note_power(n);
      arm_sfu_timer(n);
    }
    return true;
  }

  void start_wake(SfuNode& n) {
    const auto done = n.power->begin_wake(sim.now());
    if (!done) return;
    const NodeId id = n.id;
    sim.schedule(*done, id, EventKind::StateDeadline, [this, id] {
      SfuNode& s = sfus.at(id);
      if (!s.power->request(PowerState::Idle, sim.now())) return;
      note_power(s);
      const bool busy = !s.wifi_q.empty() || !s.up_q.empty() || !s.ofdma_q.empty();
      if (busy) sfu_activity(s);
      arm_sfu_timer(s);
      if (!grants_mode) wifi_wakeup(s);
    });
  }

  void policy_window(SfuNode& n) {
    const SimTime now = sim.now();
    bool predicted = false;
    for (const TimeWindow& w : cfg.energy.predicted_high_load) predicted |= w.from <= now && now < w.to;
    const auto f = n.features.close_window(now, predicted);
    n.power->set_policy(energy::select_policy(f), now);
    note_power(n);
    arm_sfu_timer(n);
    const NodeId id = n.id;
    if (now + cfg.energy.policy_window <= horizon())
      sim.schedule(now + cfg.energy.policy_window, id, EventKind::TimerExpiry,
                   [this, id] { policy_window(sfus.at(id)); });
  }

  bool wifi_usable(const SfuNode& n) const { return !n.dead && !energy::is_sleep(n.power->state()); }

  // ---- SFU downstream reception ----

  void sfu_receive(std::uint64_t transit_id) {
    auto node = down_transit.extract(transit_id);
    Delivery& d = node.mapped();
    SfuNode& n = sfus.at(d.sfu);
    const SimTime now = sim.now();
    if (n.dead) {
      lose_all(d.pkts, Loss::SfuDown);
      return;
    }
    const PowerState st = n.power->state();
    const auto& prof = cfg.energy.profile;
    if (st == PowerState::DeepSleep) {
      if (!energy::in_listen_window(n.power->entered_at(), now, prof.t_listen, prof.listen_window)) {
        lose_all(d.pkts, Loss::SleepReceiver);
        return;
      }
      for (const auto& m : d.ploams)
        if (m.kind == frames::PloamKind::WakeCommand) start_wake(n);
      lose_all(d.pkts, Loss::SleepReceiver);
      return;
    }

    for (const auto& m : d.ploams) {
      if (m.kind == frames::PloamKind::WakeCommand && energy::is_sleep(st)) start_wake(n);
      if (m.kind == frames::PloamKind::DeepSleepCommand && st == PowerState::LightSleep && !n.power->waking()) {
        if (n.power->request(PowerState::DeepSleep, now)) note_power(n);
      }
    }
    if (n.power->state() == PowerState::DeepSleep) {
      lose_all(d.pkts, Loss::SleepReceiver);
      return;
    }

    n.map_seen = d.map_seq;
    const NodeId id = n.id;
    if (d.omci) {
      const auto w = *d.omci;
      sim.schedule(w.start + n.eq, id, EventKind::TimerExpiry, [this, id, w] { omci_burst(sfus.at(id), w); });
    }
    for (const DataSlot& s : d.slots) {
      if (!s.pinned) n.known_grants += s.bytes;
      sim.schedule(s.start + n.eq, id, EventKind::TimerExpiry, [this, id, s] { data_burst(sfus.at(id), s); });
    }

    if (d.pkts.empty()) return;
    sfu_activity(n);
    for (Packet& p : d.pkts) {
      n.features.optical(p.payload, now, p.service);
      if (p.omci) {
        const auto resp = n.mib.apply(frames::decode_omci(*p.omci));
        ControlItem c;
        c.kind = ControlItem::Omci;
        c.omci = frames::encode_omci(resp);
        c.ready = now + cfg.latencies.sfu;
        n.omci_out.push_back(std::move(c));
        continue;
      }
      p.ready = now + cfg.latencies.sfu;
      wifi_enqueue(n, std::move(p));
    }
    if (!grants_mode) wifi_wakeup(n);
  }

  // ---- Wi-Fi side ----

  void wifi_enqueue(SfuNode& n, Packet p) {
    const std::size_t a = air_bytes(p);
    if (n.wifi_bytes + a > cfg.wifi_queue_bytes) {
      lose(p, Loss::QueueOverflow);
      return;
    }
    n.wifi_bytes += a;
    ++n.prio_count[p.priority & 7];
    insert_by_ready(n.wifi_q, std::move(p));
  }

  Packet wifi_pop(SfuNode& n) {
    Packet p = std::move(n.wifi_q.front());
    n.wifi_q.pop_front();
    n.wifi_bytes -= air_bytes(p);
    --n.prio_count[p.priority & 7];
    return p;
  }

  void wifi_requeue_front(SfuNode& n, std::vector<Packet>& v) {
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
      n.wifi_bytes += air_bytes(*it);
      ++n.prio_count[it->priority & 7];
      n.wifi_q.push_front(std::move(*it));
    }
    v.clear();
  }

  /// Pops ready frames up to `cap` air bytes.
  std::vector<Packet> wifi_take(SfuNode& n, std::size_t cap, std::size_t& bytes) {
    std::vector<Packet> v;
    bytes = 0;
    while (!n.wifi_q.empty() && n.wifi_q.front().ready <= sim.now() && bytes + air_bytes(n.wifi_q.front()) <= cap) {
      bytes += air_bytes(n.wifi_q.front());
      v.push_back(wifi_pop(n));
    }
    return v;
  }

  void wifi_delivered(SfuNode& n, std::vector<Packet>& v) {
    for (const Packet& p : v) {
      deliver(p, sim.now());
      n.features.wireless(p.payload, sim.now(), p.service);
    }
    v.clear();
  }

  void schedule_kick(SfuNode& n, SimTime at) {
    if (at >= n.kick_at && n.kick_at >= sim.now()) return;
    n.kick_at = at;
    const NodeId id = n.id;
    sim.schedule(at, id, EventKind::TimerExpiry, [this, id] {
      SfuNode& s = sfus.at(id);
      if (s.kick_at == sim.now()) s.kick_at = kTimeNever;
      air.kick(id);
    });
  }

  void wifi_wakeup(SfuNode& n) {
    if (n.wifi_q.empty() || !wifi_usable(n)) return;
    if (n.wifi_q.front().ready <= sim.now())
      air.kick(n.id);
    else
      schedule_kick(n, n.wifi_q.front().ready);
  }

  std::size_t begin_burst(SfuNode& n) {
    std::size_t bytes = 0;
    for (const Packet& p : n.frozen) bytes += air_bytes(p);
    if (!n.frozen.empty()) return bytes;
    if (!wifi_usable(n)) return 0;
    n.frozen = wifi_take(n, cfg.wifi.max_aggregate_bytes, bytes);
    if (n.frozen.empty()) {
      if (!n.wifi_q.empty()) schedule_kick(n, n.wifi_q.front().ready);
      return 0;
    }
    sfu_activity(n);
    return bytes;
  }

  void end_burst(SfuNode& n, bool ok, bool abandoned) {
    if (n.dead) {
      lose_all(n.frozen, Loss::SfuDown);
      return;
    }
    if (ok)
      wifi_delivered(n, n.frozen);
    else if (abandoned)
      lose_all(n.frozen, Loss::Air);
  }

  // ---- air grants ----

  std::uint64_t grant_capacity(Duration d) const {
    const auto& p = cfg.wifi;
    const Duration full = links::airtime(p, p.max_aggregate_bytes);
    std::uint64_t bytes = 0;
    while (d >= full) {
      bytes += p.max_aggregate_bytes;
      d -= full;
    }
    return bytes + links::payload_fitting(p, d);
  }

  void check_grant(const scheduling::AirGrant& g) {
    while (!live_grants.empty() && live_grants.front().end() <= sim.now()) live_grants.pop_front();
    for (const auto& o : live_grants) {
      const bool related = o.sfu == g.sfu || graph.conflicts(o.sfu, g.sfu);
      if (related && o.start < g.end() && g.start < o.end())
        breach("grant overlap", "cells " + to_string(o.sfu) + " and " + to_string(g.sfu));
    }
    auto it = std::upper_bound(live_grants.begin(), live_grants.end(), g.end(),
                               [](SimTime t, const scheduling::AirGrant& x) { return t < x.end(); });
    live_grants.insert(it, g);
    ++out.scheduling.grants;
    if (g.reason == scheduling::GrantReason::UplinkTrigger) ++out.scheduling.trigger_rounds;
    for (auto& f : grant_obs) f(g);
    if (log_schedule) {
      std::ostringstream line;
      line << "GRANT " << to_ns(g.start) << ' ' << to_string(g.sfu) << ' ' << g.max_duration.count() << ' '
           << scheduling::to_string(g.reason);
      schedule.push_back(line.str());
    }
  }

  void plan_grants() {
    const SimTime now = sim.now();
    std::vector<scheduling::SfuStatusReport> reports;
    for (const auto& r : collector.fresh(now)) {
      auto it = last_planned.find(r.sfu);
      if (it != last_planned.end() && it->second >= r.timestamp) continue;
      last_planned[r.sfu] = r.timestamp;
      reports.push_back(r);
    }
    std::map<NodeId, std::uint64_t> want;
    for (const auto& r : reports) want[r.sfu] = r.buffered_bytes;
    for (const auto& g : planner->plan(now + cfg.grant_lead, reports)) {
      check_grant(g);
      SfuNode& n = sfus.at(g.sfu);
      const std::uint64_t covered = std::min<std::uint64_t>(want[g.sfu], grant_capacity(g.max_duration));
      n.reserved += covered;
      const NodeId id = g.sfu;
      const SimTime end = g.end();
      sim.schedule(g.start, id, EventKind::GrantStart, [this, id, end, covered] {
        SfuNode& s = sfus.at(id);
        if (!wifi_usable(s)) {
          release(s, covered);
          return;
        }
        granted_send(s, end, covered);
      });
    }
    if (now + cfg.status_cycle <= horizon())
      sim.schedule(now + cfg.status_cycle, kMfuNode, EventKind::TimerExpiry, [this] { plan_grants(); });
  }

  void release(SfuNode& n, std::uint64_t covered) { n.reserved -= std::min(n.reserved, covered); }

  void granted_send(SfuNode& n, SimTime end, std::uint64_t covered) {
    const std::size_t cap = std::min(cfg.wifi.max_aggregate_bytes, links::payload_fitting(cfg.wifi, end - sim.now()));
    std::size_t bytes = 0;
    std::vector<Packet> batch = n.dead ? std::vector<Packet>{} : wifi_take(n, cap, bytes);
    if (batch.empty()) {
      release(n, covered);
      return;
    }
    sfu_activity(n);
    const NodeId id = n.id;
    air.transmit_granted(id, bytes, [this, id, end, covered](bool ok) {
      SfuNode& s = sfus.at(id);
      if (s.dead)
        lose_all(s.on_air, Loss::SfuDown);
      else if (ok)
        wifi_delivered(s, s.on_air);
      else
        wifi_requeue_front(s, s.on_air);
      granted_send(s, end, covered);
    });
    n.on_air = std::move(batch);
  }

  // ---- OFDMA trigger rounds ----

  void schedule_ofdma_plan(std::size_t i, SimTime round) {
    if (round > horizon()) return;
    const SimTime at = std::max(sim.now(), round - cfg.ofdma_lead);
    sim.schedule(at, kMfuNode, EventKind::TimerExpiry, [this, i, round] { plan_ofdma(i, round); });
  }

  std::uint64_t ofdma_air_bytes(const OfdmaSpec& o) const {
    std::uint64_t b = 0;
    for (const auto& ru : o.rus) b += ru.ru_bytes + kWifiMacOverhead;
    return b;
  }

  void plan_ofdma(std::size_t i, SimTime round) {
    const OfdmaSpec& o = cfg.ofdma[i];
    const Duration on_air = links::airtime(cfg.wifi, ofdma_air_bytes(o));
    SimTime start = grants_mode ? planner->earliest_start(o.sfu, round) : round;
    if (o.pre_request) {
      std::uint64_t bytes = 0;
      if (cfg.mode == SchedulerMode::PhyRelay) {
        for (const auto& ru : o.rus) bytes += upstream_wire(static_cast<std::uint32_t>(ru.ru_bytes));
      } else if (auto r = scheduling::ofdma_request(o.sfu, o.rus, o.per_sta_overhead)) {
        bytes = r->bytes_expected;
      }
      // Keep the pinned burst inside one allocation cycle.
      const Duration need = scheduling::burst_time(cfg.optical_up, bytes) + cfg.dba.guard;
      const Duration off = (start + on_air - kTimeZero) % cycle;
      if (need <= cycle && off + need > cycle) start += cycle - off;
      if (bytes > 0) dba.pin({o.sfu, bytes, frames::kDataTcont, start + on_air});
    }
    if (grants_mode) {
      const scheduling::AirGrant g{o.sfu, start, on_air, scheduling::GrantReason::UplinkTrigger};
      planner->reserve(g);
      check_grant(g);
    }
    if (start <= horizon()) {
      const NodeId id = o.sfu;
      sim.schedule(start, id, EventKind::GrantStart, [this, i] { ofdma_round(i); });
    }
    schedule_ofdma_plan(i, round + o.period);
  }

  void ofdma_round(std::size_t i) {
    const OfdmaSpec& o = cfg.ofdma[i];
    SfuNode& n = sfus.at(o.sfu);
    if (n.dead || energy::is_sleep(n.power->state())) return;
    if (air.occupied(n.id)) {
      // Contended cell still on the air: trigger after it.
      sim.schedule(sim.now() + cfg.wifi.slot, n.id, EventKind::GrantStart, [this, i] { ofdma_round(i); });
      return;
    }
    const std::size_t fi = flow_index.at(o.flow);
    for (const auto& ru : o.rus) {
      Packet p;
      p.flow = static_cast<std::uint32_t>(fi);
      p.sfu = o.sfu;
      p.payload = static_cast<std::uint32_t>(ru.ru_bytes);
      p.priority = o.priority;
      p.service = o.service;
      p.tag = frames::classification_tag(o.priority, o.service);
      p.created = sim.now();
      p.pinned = o.pre_request;
      offer(flows[fi], p.payload);
      n.trigger_air.push_back(std::move(p));
    }
    sfu_activity(n);
    const NodeId id = n.id;
    air.transmit_granted(id, ofdma_air_bytes(o), [this, id](bool ok) {
      SfuNode& s = sfus.at(id);
      std::vector<Packet> v = std::move(s.trigger_air);
      s.trigger_air.clear();
      if (!ok || s.dead) {
        lose_all(v, s.dead ? Loss::SfuDown : Loss::Air);
        return;
      }
      for (Packet& p : v) {
        p.ready = sim.now();
        s.features.wireless(p.payload, sim.now(), p.service);
        s.features.optical(p.payload, sim.now(), p.service);
        const bool pinned = p.pinned;
        upstream_enqueue(s, std::move(p), pinned);
      }
    });
  }

  // ---- SFU upstream bursts ----

  std::uint64_t ready_upstream_bytes(const SfuNode& n) const {
    std::uint64_t b = 0;
    for (const Packet& p : n.up_q) {
      if (p.ready > sim.now()) break;
      b += p.wire;
    }
    return b;
  }

  scheduling::SfuStatusReport status_report(const SfuNode& n) const {
    scheduling::SfuStatusReport r;
    r.sfu = n.id;
    r.buffered_bytes = n.wifi_bytes > n.reserved ? n.wifi_bytes - n.reserved : 0;
    for (int p = 7; p >= 0; --p)
      if (n.prio_count[p] > 0) {
        r.top_priority = static_cast<std::uint8_t>(p);
        break;
      }
    r.active_users = n.spec.stations;
    r.timestamp = sim.now();
    return r;
  }

  void omci_burst(SfuNode& n, scheduling::DbaAllocator::Window w) {
    const PowerState st = n.power->state();
    if (n.dead || st == PowerState::DeepSleep) return;
    const SimTime now = sim.now();
    const std::uint64_t cap = scheduling::burst_payload_capacity(cfg.optical_up, w.len);
    std::vector<ControlItem> items;
    std::uint64_t used = 0;
    const bool awake = !energy::is_sleep(st);
    if (awake) {
      ControlItem b;
      b.kind = ControlItem::Backlog;
      const std::uint64_t q = ready_upstream_bytes(n);
      b.backlog = q > n.known_grants ? q - n.known_grants : 0;
      b.map_seen = n.map_seen;
      items.push_back(b);
      used += kBacklogReportBytes;
      if (now >= n.next_status) {
        ControlItem s;
        s.kind = ControlItem::Status;
        s.status = status_report(n);
        items.push_back(s);
        used += kStatusReportBytes;
        while (n.next_status <= now) n.next_status += cfg.status_cycle;
      }
    }
    if (n.power_dirty && used + kPowerReportBytes <= cap) {
      ControlItem p;
      p.kind = ControlItem::Power;
      p.power = {st, n.power->policy()};
      items.push_back(p);
      used += kPowerReportBytes;
      n.reported = p.power;
      n.power_dirty = false;
    }
    while (!n.omci_out.empty() && n.omci_out.front().ready <= now &&
           used + kFem + n.omci_out.front().omci.size() <= cap) {
      used += kFem + n.omci_out.front().omci.size();
      items.push_back(std::move(n.omci_out.front()));
      n.omci_out.pop_front();
    }
    if (items.empty()) return;
    send_up(n, {}, std::move(items), used, w.start + n.eq, w.len);
  }

  void data_burst(SfuNode& n, const DataSlot& s, bool deferred = false) {
    if (!s.pinned) n.known_grants -= std::min(n.known_grants, s.bytes);
    if (n.dead || energy::is_sleep(n.power->state())) return;
    const SimTime now = sim.now();
    if (s.pinned && !deferred && !n.trigger_air.empty()) {
      // The trigger round may end at this very instant; look again after its reception.
      const NodeId id = n.id;
      sim.schedule(now, id, EventKind::TimerExpiry, [this, id, s] { data_burst(sfus.at(id), s, true); });
      return;
    }
    std::vector<Packet> pkts;
    std::uint64_t used = 0;
    auto drain = [&](std::deque<Packet>& q) {
      while (!q.empty() && q.front().ready <= now && used + q.front().wire <= s.bytes) {
        used += q.front().wire;
        n.up_bytes -= q.front().wire;
        pkts.push_back(std::move(q.front()));
        q.pop_front();
      }
    };
    if (s.pinned) drain(n.ofdma_q);
    drain(n.up_q);
    if (pkts.empty()) return;
    for (const Packet& p : pkts)
      if (flows[p.flow].m.ofdma) flows[p.flow].forwarding.push_back(to_ns(s.start) - to_ns(p.ready));
    if (cfg.mode == SchedulerMode::PhyRelay && n.up_bytes == 0)
      alarms.clear(n.id, management::AlarmKind::BufferOverflow, now);
    sfu_activity(n);
    send_up(n, std::move(pkts), {}, used, now, s.len);
  }

  void send_up(SfuNode& n, std::vector<Packet> pkts, std::vector<ControlItem> items, std::uint64_t payload,
               SimTime slot_start, Duration slot_len) {
    const std::size_t wire = frames::pma_encoded_size(frames::pcs_header_size(0, 0) + payload);
    const auto burst = optical.send_upstream(sim.now(), n.id, wire, slot_start, slot_len);
    const std::uint64_t id = next_transit++;
    up_transit.emplace(id, UpTransit{burst.id, n.id, std::move(pkts), std::move(items)});
    sim.schedule(std::max(burst.arrival, sim.now()), kMfuNode, EventKind::FrameArrival, [this, id] { mfu_receive(id); });
  }

  // ---- MFU upstream reception ----

  void mfu_receive(std::uint64_t transit_id) {
    auto node = up_transit.extract(transit_id);
    UpTransit& u = node.mapped();
    const SimTime now = sim.now();
    const auto status = optical.complete_upstream(u.burst);
    if (status != links::UpstreamStatus::Delivered) {
      if (status == links::UpstreamStatus::SlotViolation || status == links::UpstreamStatus::Collision)
        alarms.raise(u.sfu, management::AlarmKind::SlotViolation, now);
      lose_all(u.pkts, status == links::UpstreamStatus::LinkDown ? Loss::LinkDown : Loss::Upstream);
      for (const auto& c : u.items)
        if (c.kind == ControlItem::Omci) ++out.management.failed;
      return;
    }
    liveness.heard(u.sfu);
    if (!u.pkts.empty()) {
      mfu_activity();
      for (const Packet& p : u.pkts) deliver(p, now + cfg.latencies.mfu);
    }
    for (ControlItem& c : u.items) {
      switch (c.kind) {
        case ControlItem::Backlog: {
          std::uint64_t unseen = 0;
          for (const auto& [seq, g] : recent_maps)
            if (seq > c.map_seen)
              if (auto it = g.find(u.sfu); it != g.end()) unseen += it->second;
          dba.set_demand(u.sfu, c.backlog > unseen ? c.backlog - unseen : 0);
          break;
        }
        case ControlItem::Status:
          collector.record(c.status);
          ++out.management.status_reports;
          break;
        case ControlItem::Power: on_power_report(u.sfu, c.power); break;
        case ControlItem::Omci: {
          out.management.max_upstream_delay_ns =
              std::max(out.management.max_upstream_delay_ns, to_ns(now) - to_ns(c.ready));
          const bool routed = adapter.route_upstream(frames::decode_omci(c.omci), u.sfu).has_value();
          if (!routed) {
            ++out.management.failed;
            break;
          }
          if (now + cfg.management.olt_latency <= horizon())
            sim.schedule(now + cfg.management.olt_latency, kOltNode, EventKind::FrameArrival,
                         [this] { ++out.management.delivered; });
          break;
        }
      }
    }
  }

  void on_power_report(NodeId sfu, const energy::SleepReport& r) {
    power_reports.push_back({sim.now(), sfu, r.state, r.policy});
    last_reports[sfu] = r;
    if (energy::is_sleep(r.state)) {
      believed_asleep.insert(sfu);
      liveness.set_sleeping(sfu, true);
      return;
    }
    liveness.set_sleeping(sfu, false);
    deep_cmd_sent = false;
    wake_wanted.erase(sfu);
    if (believed_asleep.erase(sfu) != 0)
      for (Packet& p : sleep_bufs.at(sfu).flush()) admit(std::move(p));
  }

  // ---- OLT management load ----

  void olt_request(std::uint32_t i) {
    const OmciLoadSpec& spec = cfg.management.requests;
    auto& rng = sim.rng(kOltNode);
    std::vector<std::uint8_t> targets;
    for (const auto& [id, n] : sfus) targets.push_back(static_cast<std::uint8_t>(to_underlying(id)));
    for (unsigned v = 255, extra = 0; extra < spec.unknown_ids && v > 0; --v)
      if (sfus.count(NodeId{static_cast<std::uint16_t>(v)}) == 0) {
        targets.push_back(static_cast<std::uint8_t>(v));
        ++extra;
      }

    frames::OmciMessage m;
    m.transaction_id = static_cast<std::uint16_t>(i + 1);
    bool set = spec.kind == OmciRequestKind::Set;
    if (spec.kind == OmciRequestKind::Mixed) set = rng.uniform(0, 1) == 0;
    m.msg_type = set ? frames::omci_type::kSet : frames::omci_type::kGet;
    m.device_flags = 0x0A;
    m.entity_class = static_cast<std::uint16_t>(rng.uniform(1, 5));
    m.entity_instance = static_cast<std::uint16_t>(rng.uniform(0, 3));
    if (set) {
      const auto len = rng.uniform(1, 8);
      for (std::uint64_t k = 0; k < len; ++k) m.content.push_back(static_cast<std::uint8_t>(rng.uniform(0, 255)));
    }
    m.route = frames::OmciRoute{adapter.port(), targets[rng.uniform(0, targets.size() - 1)]};
    omci_requests.push_back(m);
    ++out.management.sent;

    const frames::Bytes wire = frames::encode_omci(m);
    const SimTime at = sim.now() + cfg.management.olt_latency;
    if (at <= horizon())
      sim.schedule(at, kMfuNode, EventKind::FrameArrival, [this, wire] { mfu_omci_down(wire); });

    if (i + 1 < spec.count && sim.now() + spec.interval <= horizon())
      sim.schedule(sim.now() + spec.interval, kOltNode, EventKind::TimerExpiry, [this, i] { olt_request(i + 1); });
  }

  void mfu_omci_down(const frames::Bytes& wire) {
    const auto routed = adapter.route_downstream(frames::decode_omci(wire));
    if (!routed.target) {
      ++out.management.failed;
      return;
    }
    Packet p;
    p.sfu = *routed.target;
    p.omci = std::make_shared<const frames::Bytes>(frames::encode_omci(routed.message));
    p.payload = static_cast<std::uint32_t>(p.omci->size());
    p.wire = static_cast<std::uint32_t>(kFem + p.payload);
    p.tag = frames::kManagementTag;
    p.created = sim.now();
    p.ready = sim.now() + cfg.latencies.mfu;
    insert_by_ready(staging, std::move(p));
  }

  // ---- liveness and faults ----

  void poll() {
    liveness.poll(sim.now());
    if (sim.now() + cfg.management.poll <= horizon())
      sim.schedule(sim.now() + cfg.management.poll, kMfuNode, EventKind::TimerExpiry, [this] { poll(); });
  }

  void fault(const FaultEvent& e) {
    const SimTime now = sim.now();
    switch (e.kind) {
      case FaultKind::KillSfu: {
        SfuNode& n = sfus.at(e.sfu);
        n.dead = true;
        lose_all(n.wifi_q, Loss::SfuDown);
        n.wifi_bytes = 0;
        n.prio_count = {};
        n.reserved = 0;
        lose_all(n.up_q, Loss::SfuDown);
        lose_all(n.ofdma_q, Loss::SfuDown);
        n.up_bytes = 0;
        n.known_grants = 0;
        for (const auto& c : n.omci_out)
          if (c.kind == ControlItem::Omci) ++out.management.failed;
        n.omci_out.clear();
        break;
      }
      case FaultKind::ReviveSfu: {
        SfuNode& n = sfus.at(e.sfu);
        n.dead = false;
        n.power_dirty = true;
        break;
      }
      case FaultKind::FiberCut:
        optical.set_cut(true);
        liveness.set_link_down(true, now);
        break;
      case FaultKind::FiberRepair:
        optical.set_cut(false);
        liveness.set_link_down(false, now);
        break;
    }
  }

  // ---- end of run ----

  /// Frames still inside the network, per flow index.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> census() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> c(flows.size());
    auto add = [&](const Packet& p) {
      if (p.flow == kNoFlow) return;
      ++c[p.flow].first;
      c[p.flow].second += p.payload;
    };
    for (const Packet& p : staging) add(p);
    for (std::size_t t = 0; t < frames::kTagCount; ++t)
      for (const Packet& p : drr.queue(t)) add(p);
    for (const auto& [id, b] : sleep_bufs)
      for (const Packet& p : b.items()) add(p);
    for (const auto& [id, d] : down_transit)
      for (const Packet& p : d.pkts) add(p);
    for (const auto& [id, u] : up_transit)
      for (const Packet& p : u.pkts) add(p);
    for (const auto& [id, n] : sfus) {
      for (const Packet& p : n.wifi_q) add(p);
      for (const Packet& p : n.frozen) add(p);
      for (const Packet& p : n.on_air) add(p);
      for (const Packet& p : n.trigger_air) add(p);
      for (const Packet& p : n.up_q) add(p);
      for (const Packet& p : n.ofdma_q) add(p);
    }
    return c;
  }

  RunMetrics finish() {
    const SimTime end = horizon();
    // Arrivals after the last allocation cycle are offered but never admitted.
    for (std::size_t si = 0; si < sources.size(); ++si) {
      scratch.clear();
      sources[si].pull(end, scratch);
      FlowState& f = flows[flow_index.at(sources[si].spec().id)];
      for (const Arrival& a : scratch) {
        offer(f, a.size);
        ++f.unadmitted_frames;
        f.unadmitted_bytes += a.size;
      }
    }
    ledger.close(end);

    const auto pending = census();
    for (std::size_t i = 0; i < flows.size(); ++i) {
      FlowState& f = flows[i];
      f.m.pending_frames = pending[i].first + f.unadmitted_frames;
      f.m.pending_bytes = pending[i].second + f.unadmitted_bytes;
      if (f.m.offered_frames != f.m.delivered_frames + f.m.lost_frames + f.m.pending_frames)
        breach("flow conservation", "flow " + std::to_string(f.m.id));
    }
    if (auto why = ledger.partition_violation(end)) breach("energy ledger partition", *why);
    const auto ev = sim.counters();
    if (ev.scheduled != ev.dispatched + ev.cancelled + ev.pending)
      breach("event conservation", std::to_string(ev.scheduled) + " scheduled");

    RunMetrics& m = out;
    m.scenario = cfg.name;
    m.fingerprint = scenario_fingerprint(cfg);
    m.seed = cfg.seed;
    m.mode = cfg.mode;
    m.horizon = cfg.horizon;
    m.savings = cfg.energy.savings;
    for (FlowState& f : flows) {
      f.m.latency = summarize(std::move(f.latency));
      if (f.m.ofdma) f.m.forwarding_delay = summarize(std::move(f.forwarding));
      m.flows.push_back(f.m);
    }
    std::sort(m.flows.begin(), m.flows.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& [id, n] : sfus) {
      CellMetrics c;
      c.sfu = id;
      c.stats = air.stats(id);
      c.utilization = static_cast<double>(c.stats.busy.count()) / static_cast<double>(cfg.horizon.count());
      m.cells.push_back(c);
    }
    m.optical = optical.stats();
    m.management.pending = m.management.sent - std::min(m.management.sent, m.management.delivered + m.management.failed);
    m.management.unknown_targets = adapter.unknown_targets();
    m.management.alarms = alarms.alarms().size();

    for (NodeId node : ledger.nodes()) {
      NodeEnergy e;
      e.node = node;
      e.type = ledger.type(node);
      e.joules = ledger.joules(node);
      e.residency = ledger.residency(node);
      m.energy.nodes.push_back(e);
    }
    m.energy.fttr_joules = ledger.total_joules();
    m.energy.ftth_joules = energy::ftth_baseline_joules(ledger.intervals(kMfuNode), cfg.energy.profile);
    m.energy.ratio = m.energy.ftth_joules > 0 ? m.energy.fttr_joules / m.energy.ftth_joules : 0;
    m.energy.deep_sleep_commands = deep_cmds.size();
    for (const auto& [id, n] : sfus) m.energy.rejected_transitions += n.power->rejected();

    m.digest = sim.digest().hex();
    m.events = sim.digest().events();
    return m;
  }
};

FttrNetwork::FttrNetwork(const ScenarioConfig& cfg) : impl_{std::make_unique<Impl>(cfg)} {}
FttrNetwork::~FttrNetwork() = default;

RunMetrics FttrNetwork::run() {
  if (impl_->ran) throw std::logic_error{"a network runs once"};
  impl_->ran = true;
  impl_->sim.run_until(impl_->horizon());
  return impl_->finish();
}

void FttrNetwork::on_tamap(std::function<void(const frames::Tamap&)> f) { impl_->tamap_obs.push_back(std::move(f)); }
void FttrNetwork::on_grant(std::function<void(const scheduling::AirGrant&)> f) {
  impl_->grant_obs.push_back(std::move(f));
}
void FttrNetwork::record_schedule(bool on) { impl_->log_schedule = on; }
const std::vector<std::string>& FttrNetwork::schedule_log() const { return impl_->schedule; }
const management::AlarmLog& FttrNetwork::alarms() const { return impl_->alarms; }
const management::MibStore& FttrNetwork::mib(NodeId sfu) const { return impl_->sfus.at(sfu).mib; }
const std::vector<frames::OmciMessage>& FttrNetwork::omci_requests() const { return impl_->omci_requests; }
const std::vector<FttrNetwork::PowerReport>& FttrNetwork::power_reports() const { return impl_->power_reports; }
const std::vector<SimTime>& FttrNetwork::deep_sleep_commands() const { return impl_->deep_cmds; }
const energy::EnergyLedger& FttrNetwork::ledger() const { return impl_->ledger; }
const links::InterferenceGraph& FttrNetwork::graph() const { return impl_->graph; }

}  // namespace fttr::scenario
