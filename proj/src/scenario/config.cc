// SPDX-License-Identifier: Apache-2.0
#include "fttr/scenario/config.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fttr::scenario {
namespace {

using scheduling::SchedulerMode;

/// Splits "12.5Mbps" into 12.5 and "Mbps".
std::optional<std::pair<double, std::string_view>> split_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::size_t i = 0;
  while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == 'e' ||
                          s[i] == 'E' || s[i] == '+' || s[i] == '-')) {
    // an 'e' only belongs to the number when a digit follows
    if ((s[i] == 'e' || s[i] == 'E') && (i + 1 >= s.size() || !(std::isdigit(static_cast<unsigned char>(s[i + 1])) ||
                                                                s[i + 1] == '-' || s[i + 1] == '+')))
      break;
    ++i;
  }
  if (i == 0) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + i, v);
  if (ec != std::errc{} || p != s.data() + i || !std::isfinite(v) || v < 0) return std::nullopt;
  std::string_view unit = s.substr(i);
  while (!unit.empty() && unit.front() == ' ') unit.remove_prefix(1);
  return std::pair{v, unit};
}

std::optional<std::uint64_t> scaled(double v, double scale) {
  const double x = v * scale;
  if (x > 9.2e18) return std::nullopt;
  const double r = std::round(x);
  if (std::fabs(x - r) > 1e-6 * std::max(1.0, r)) return std::nullopt;  // sub-unit fraction
  return static_cast<std::uint64_t>(r);
}

class Reader {
 public:
  Reader(YAML::Node node, std::string path) : node_{std::move(node)}, path_{std::move(path)} {}

  [[noreturn]] void fail(const std::string& msg) const { fail_at(node_, msg); }

  [[noreturn]] void fail_at(const YAML::Node& n, const std::string& msg) const {
    const YAML::Mark m = n.Mark();
    throw ConfigError{m.line + 1, m.column + 1, path_ + ": " + msg};
  }

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }

  void expect_map(std::initializer_list<std::string_view> keys) const {
    if (!node_.IsMap()) fail("expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail_at(kv.first, "unknown key '" + key + "'");
    }
  }

  bool has(const char* key) const { return node_[key].IsDefined() && !node_[key].IsNull(); }

  Reader at(const char* key) const {
    if (!has(key)) fail("missing required key '" + std::string{key} + "'");
    return Reader{node_[key], path_ + "." + key};
  }
  std::optional<Reader> maybe(const char* key) const {
    if (!has(key)) return std::nullopt;
    return Reader{node_[key], path_ + "." + key};
  }
  std::vector<Reader> items() const {
    if (!node_.IsSequence()) fail("expected a list");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < node_.size(); ++i) out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  std::string str() const {
    if (!node_.IsScalar()) fail("expected a scalar");
    return node_.Scalar();
  }
  bool boolean() const {
    bool b = false;
    if (!node_.IsScalar() || !YAML::convert<bool>::decode(node_, b)) fail("expected true or false");
    return b;
  }
  std::uint64_t u64(std::uint64_t lo = 0, std::uint64_t hi = UINT64_MAX) const {
    auto num = split_number(str());
    std::optional<std::uint64_t> v;
    if (num && num->second.empty()) v = scaled(num->first, 1);
    if (!v) fail("expected a non-negative integer");
    if (*v < lo || *v > hi) fail("value " + std::to_string(*v) + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
    return *v;
  }
  double real(double lo = 0) const {
    auto num = split_number(str());
    if (!num || !num->second.empty()) fail("expected a number");
    if (num->first < lo) fail("value below " + std::to_string(lo));
    return num->first;
  }
  Duration duration(bool positive = true) const {
    auto d = parse_duration(str());
    if (!d) fail("expected a duration such as 125us, 10ms or 2s");
    if (positive && d->count() <= 0) fail("duration must be positive");
    return *d;
  }
  SimTime instant() const { return kTimeZero + duration(false); }
  DataRate rate() const {
    auto r = parse_rate_bps(str());
    if (!r) fail("expected a rate such as 100Mbps or 1.2Gbps");
    if (*r == 0) fail("rate must be positive");
    return DataRate{*r};
  }
  std::uint64_t size(bool positive = true) const {
    auto b = parse_size_bytes(str());
    if (!b) fail("expected a byte size such as 1500, 64KB or 2MB");
    if (positive && *b == 0) fail("size must be positive");
    return *b;
  }

 private:
  YAML::Node node_;
  std::string path_;
};

NodeId node_id(const Reader& r) { return NodeId{static_cast<std::uint16_t>(r.u64(1, 255))}; }

frames::ServiceClass service(const Reader& r) {
  auto s = frames::parse_service_class(r.str());
  if (!s) r.fail("unknown service class '" + r.str() + "' (video, gaming, background, iot, control)");
  return *s;
}

void read_wifi(const Reader& r, links::WifiParams& w) {
  r.expect_map({"air_rate", "difs", "sifs", "slot", "cw_min", "cw_max", "preamble", "ack_overhead", "retry_limit",
                "max_aggregate"});
  if (auto x = r.maybe("air_rate")) w.air_rate = x->rate();
  if (auto x = r.maybe("difs")) w.difs = x->duration();
  if (auto x = r.maybe("sifs")) w.sifs = x->duration();
  if (auto x = r.maybe("slot")) w.slot = x->duration();
  if (auto x = r.maybe("cw_min")) w.cw_min = static_cast<std::uint32_t>(x->u64(0, 65535));
  if (auto x = r.maybe("cw_max")) w.cw_max = static_cast<std::uint32_t>(x->u64(0, 65535));
  if (auto x = r.maybe("preamble")) w.preamble = x->duration();
  if (auto x = r.maybe("ack_overhead")) w.ack_overhead = x->duration(false);
  if (auto x = r.maybe("retry_limit")) w.retry_limit = static_cast<std::uint32_t>(x->u64(0, 64));
  if (auto x = r.maybe("max_aggregate")) w.max_aggregate_bytes = x->size();
  if (auto why = links::wifi_params_violation(w)) r.fail(*why);
}

void read_watts(const Reader& r, energy::StateWatts& w) {
  using enum energy::PowerState;
  r.expect_map({"active", "idle", "light_sleep", "deep_sleep", "rf_off", "reduced_tx"});
  if (auto x = r.maybe("active")) w[Active] = x->real();
  if (auto x = r.maybe("idle")) w[Idle] = x->real();
  if (auto x = r.maybe("light_sleep")) w[LightSleep] = x->real();
  if (auto x = r.maybe("deep_sleep")) w[DeepSleep] = x->real();
  if (auto x = r.maybe("rf_off")) w[RfOff] = x->real();
  if (auto x = r.maybe("reduced_tx")) w[ReducedTx] = x->real();
}

void read_profile(const Reader& r, energy::PowerProfile& p) {
  r.expect_map({"mfu", "sfu", "ftth", "optical_rate_saving", "t_act_idle", "t_idle_sleep", "t_listen", "listen_window",
                "wake_light", "wake_deep"});
  if (auto x = r.maybe("mfu")) read_watts(*x, p.mfu);
  if (auto x = r.maybe("sfu")) read_watts(*x, p.sfu);
  if (auto x = r.maybe("ftth")) read_watts(*x, p.ftth);
  if (auto x = r.maybe("optical_rate_saving")) p.optical_rate_saving = x->real();
  if (auto x = r.maybe("t_act_idle")) p.t_act_idle = x->duration();
  if (auto x = r.maybe("t_idle_sleep")) p.t_idle_sleep = x->duration();
  if (auto x = r.maybe("t_listen")) p.t_listen = x->duration();
  if (auto x = r.maybe("listen_window")) p.listen_window = x->duration();
  if (auto x = r.maybe("wake_light")) p.wake_light = x->duration();
  if (auto x = r.maybe("wake_deep")) p.wake_deep = x->duration();
  if (auto why = energy::power_profile_violation(p)) r.fail(*why);
}

FlowSpec read_flow(const Reader& r) {
  r.expect_map({"id", "direction", "sfu", "service", "priority", "arrival", "rate", "on", "off", "count", "interval",
                "size", "start", "stop"});
  FlowSpec f;
  f.id = static_cast<std::uint32_t>(r.at("id").u64(0, UINT32_MAX));
  const Reader dir = r.at("direction");
  const std::string d = dir.str();
  if (d == "downlink") f.direction = Direction::Downlink;
  else if (d == "uplink") f.direction = Direction::Uplink;
  else if (d == "local") f.direction = Direction::Local;
  else dir.fail("unknown direction '" + d + "' (downlink, uplink, local)");
  f.sfu = node_id(r.at("sfu"));
  if (auto x = r.maybe("service")) f.service = service(*x);
  if (auto x = r.maybe("priority")) f.priority = static_cast<std::uint8_t>(x->u64(0, 7));

  const Reader arr = r.at("arrival");
  const std::string a = arr.str();
  if (a == "constant") {
    f.model = ArrivalModel::Constant;
    f.rate = r.at("rate").rate();
  } else if (a == "on_off") {
    f.model = ArrivalModel::OnOff;
    f.rate = r.at("rate").rate();
    f.on = r.at("on").duration();
    f.off = r.at("off").duration();
  } else if (a == "batch") {
    f.model = ArrivalModel::Batch;
    f.batch_count = static_cast<std::uint32_t>(r.at("count").u64(1, 10'000'000));
    if (auto x = r.maybe("interval")) f.batch_interval = x->duration();
  } else {
    arr.fail("unknown arrival model '" + a + "' (constant, on_off, batch)");
  }
  if (auto x = r.maybe("size")) {
    if (x->node().IsSequence()) {
      auto v = x->items();
      if (v.size() != 2) x->fail("size range must be [min, max]");
      f.size_min = static_cast<std::uint32_t>(v[0].size());
      f.size_max = static_cast<std::uint32_t>(v[1].size());
      if (f.size_min > f.size_max) x->fail("size range min exceeds max");
    } else {
      f.size_min = f.size_max = static_cast<std::uint32_t>(x->size());
    }
    if (f.size_max > 65000) x->fail("frame size above 65000 bytes");
  }
  if (auto x = r.maybe("start")) f.start = x->instant();
  if (auto x = r.maybe("stop")) {
    f.stop = x->instant();
    if (*f.stop <= f.start) x->fail("stop must be after start");
  }
  return f;
}

OfdmaSpec read_ofdma(const Reader& r) {
  r.expect_map({"flow", "sfu", "period", "start", "rus", "pre_request", "overhead", "priority", "service"});
  OfdmaSpec o;
  o.flow = static_cast<std::uint32_t>(r.at("flow").u64(0, UINT32_MAX));
  o.sfu = node_id(r.at("sfu"));
  if (auto x = r.maybe("period")) o.period = x->duration();
  if (auto x = r.maybe("start")) o.start = x->instant();
  if (auto x = r.maybe("pre_request")) o.pre_request = x->boolean();
  if (auto x = r.maybe("overhead")) o.per_sta_overhead = x->size(false);
  if (auto x = r.maybe("priority")) o.priority = static_cast<std::uint8_t>(x->u64(0, 7));
  if (auto x = r.maybe("service")) o.service = service(*x);
  const Reader rus = r.at("rus");
  for (const Reader& ru : rus.items()) {
    ru.expect_map({"sta", "bytes"});
    o.rus.push_back({NodeId{static_cast<std::uint16_t>(ru.at("sta").u64(1, 65534))}, ru.at("bytes").size()});
  }
  if (o.rus.empty()) rus.fail("an OFDMA round needs at least one RU");
  return o;
}

void read_management(const Reader& r, ManagementSpec& m) {
  r.expect_map({"mfu_port", "k_miss", "poll", "olt_latency", "requests"});
  if (auto x = r.maybe("mfu_port")) m.mfu_port = static_cast<std::uint8_t>(x->u64(0, 255));
  if (auto x = r.maybe("k_miss")) m.k_miss = static_cast<std::uint32_t>(x->u64(1, 1000));
  if (auto x = r.maybe("poll")) m.poll = x->duration();
  if (auto x = r.maybe("olt_latency")) m.olt_latency = x->duration(false);
  if (auto q = r.maybe("requests")) {
    q->expect_map({"count", "start", "interval", "kind", "unknown_ids"});
    auto& l = m.requests;
    l.count = static_cast<std::uint32_t>(q->at("count").u64(0, 10'000'000));
    if (auto x = q->maybe("start")) l.start = x->instant();
    if (auto x = q->maybe("interval")) l.interval = x->duration();
    if (auto x = q->maybe("unknown_ids")) l.unknown_ids = static_cast<std::uint8_t>(x->u64(0, 50));
    if (auto x = q->maybe("kind")) {
      const std::string k = x->str();
      if (k == "set") l.kind = OmciRequestKind::Set;
      else if (k == "get") l.kind = OmciRequestKind::Get;
      else if (k == "mixed") l.kind = OmciRequestKind::Mixed;
      else x->fail("unknown request kind '" + k + "' (set, get, mixed)");
    }
  }
}

void read_energy(const Reader& r, EnergySpec& e) {
  r.expect_map({"savings", "policy_window", "sleep_buffer", "profile", "predicted_high_load"});
  if (auto x = r.maybe("savings")) e.savings = x->boolean();
  if (auto x = r.maybe("policy_window")) e.policy_window = x->duration();
  if (auto x = r.maybe("sleep_buffer")) e.sleep_buffer_bytes = x->size(false);
  if (auto x = r.maybe("profile")) read_profile(*x, e.profile);
  if (auto x = r.maybe("predicted_high_load")) {
    for (const Reader& w : x->items()) {
      w.expect_map({"from", "to"});
      TimeWindow tw{w.at("from").instant(), w.at("to").instant()};
      if (tw.to <= tw.from) w.fail("window must end after it starts");
      e.predicted_high_load.push_back(tw);
    }
  }
}

FaultEvent read_event(const Reader& r) {
  r.expect_map({"at", "kind", "sfu"});
  FaultEvent ev;
  ev.at = r.at("at").instant();
  const Reader k = r.at("kind");
  const std::string s = k.str();
  if (s == "kill_sfu") ev.kind = FaultKind::KillSfu;
  else if (s == "revive_sfu") ev.kind = FaultKind::ReviveSfu;
  else if (s == "fiber_cut") ev.kind = FaultKind::FiberCut;
  else if (s == "fiber_repair") ev.kind = FaultKind::FiberRepair;
  else k.fail("unknown event kind '" + s + "' (kill_sfu, revive_sfu, fiber_cut, fiber_repair)");
  if (ev.kind == FaultKind::KillSfu || ev.kind == FaultKind::ReviveSfu) ev.sfu = node_id(r.at("sfu"));
  return ev;
}

ScenarioConfig read_root(const YAML::Node& root) {
  const Reader r{root, "scenario"};
  r.expect_map({"name", "seed", "horizon", "mode", "topology", "links", "scheduling", "flows", "ofdma", "management",
                "energy", "events", "output"});
  ScenarioConfig c;
  c.name = r.at("name").str();
  if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos) r.at("name").fail("name must be a plain word");
  if (auto x = r.maybe("seed")) c.seed = x->u64();
  c.horizon = r.at("horizon").duration();
  if (auto x = r.maybe("mode")) {
    auto m = scheduling::parse_scheduler_mode(x->str());
    if (!m) x->fail("unknown mode '" + x->str() + "' (distributed, centralized, mac_integrated, phy_relay)");
    c.mode = *m;
  }

  const Reader topo = r.at("topology");
  topo.expect_map({"sfus", "conflicts"});
  std::set<NodeId> ids;
  for (const Reader& s : topo.at("sfus").items()) {
    s.expect_map({"id", "stations", "iot", "prop_delay"});
    SfuSpec spec;
    spec.id = node_id(s.at("id"));
    if (!ids.insert(spec.id).second) s.at("id").fail("duplicate SFU id " + to_string(spec.id));
    if (auto x = s.maybe("stations")) spec.stations = static_cast<std::uint16_t>(x->u64(1, 256));
    if (auto x = s.maybe("iot")) spec.iot_resident = x->boolean();
    if (auto x = s.maybe("prop_delay")) spec.prop_delay = x->duration(false);
    c.sfus.push_back(spec);
  }
  if (c.sfus.empty()) topo.at("sfus").fail("at least one SFU is required");
  auto known = [&](const Reader& x) {
    const NodeId id = node_id(x);
    if (!ids.count(id)) x.fail("unknown SFU id " + to_string(id));
    return id;
  };
  if (auto cf = topo.maybe("conflicts")) {
    for (const Reader& e : cf->items()) {
      auto pair = e.items();
      if (pair.size() != 2) e.fail("a conflict edge is a pair [a, b]");
      const NodeId a = known(pair[0]), b = known(pair[1]);
      if (a == b) e.fail("an SFU cannot conflict with itself");
      c.conflicts.emplace_back(a, b);
    }
  }

  if (auto l = r.maybe("links")) {
    l->expect_map({"optical", "wifi", "queues"});
    if (auto o = l->maybe("optical")) {
      o->expect_map({"down", "up"});
      if (auto x = o->maybe("down")) c.optical_down = x->rate();
      if (auto x = o->maybe("up")) c.optical_up = x->rate();
    }
    if (auto w = l->maybe("wifi")) read_wifi(*w, c.wifi);
    if (auto q = l->maybe("queues")) {
      q->expect_map({"mfu", "wifi", "upstream"});
      if (auto x = q->maybe("mfu")) c.mfu_queue_bytes = x->size();
      if (auto x = q->maybe("wifi")) c.wifi_queue_bytes = x->size();
      if (auto x = q->maybe("upstream")) c.upstream_queue_bytes = x->size();
    }
  }

  c.latencies = scheduling::default_latencies(c.mode);
  if (auto s = r.maybe("scheduling")) {
    s->expect_map({"status_cycle", "txop_max", "grant_lead", "ofdma_lead", "dba", "latencies", "phy_relay"});
    if (auto x = s->maybe("status_cycle")) c.status_cycle = x->duration();
    if (auto x = s->maybe("txop_max")) c.txop_max = x->duration();
    if (auto x = s->maybe("grant_lead")) c.grant_lead = x->duration();
    if (auto x = s->maybe("ofdma_lead")) c.ofdma_lead = x->duration();
    if (auto d = s->maybe("dba")) {
      d->expect_map({"cycle", "guard", "omci_subslot", "min_slot"});
      if (auto x = d->maybe("cycle")) c.dba.cycle = x->duration();
      if (auto x = d->maybe("guard")) c.dba.guard = x->duration();
      if (auto x = d->maybe("omci_subslot")) c.dba.omci_subslot = x->duration();
      if (auto x = d->maybe("min_slot")) c.dba.min_slot_bytes = x->size();
      if (c.dba.omci_subslot <= c.dba.guard) d->fail("omci_subslot must exceed the guard time");
    }
    if (auto lat = s->maybe("latencies")) {
      lat->expect_map({"mfu", "sfu"});
      if (auto x = lat->maybe("mfu")) c.latencies.mfu = x->duration(false);
      if (auto x = lat->maybe("sfu")) c.latencies.sfu = x->duration(false);
      c.latencies_overridden = true;
    }
    if (auto p = s->maybe("phy_relay")) {
      p->expect_map({"sample_rate", "bit_width", "buffer"});
      if (auto x = p->maybe("sample_rate")) c.phy_relay.sample_rate = x->u64(1);
      if (auto x = p->maybe("bit_width")) c.phy_relay.bit_width = static_cast<std::uint32_t>(x->u64(1, 64));
      if (auto x = p->maybe("buffer")) c.phy_relay.buffer_bytes = x->size();
    }
  }
  c.dba.upstream = c.optical_up;
  const Duration omci = c.dba.omci_subslot * static_cast<std::int64_t>(c.sfus.size());
  if (c.dba.cycle <= omci + c.dba.guard) r.fail("allocation cycle too short for the OMCI sub-slots of every SFU");
  if (c.grant_lead < 2 * c.dba.cycle) r.fail("grant_lead must cover two allocation cycles");
  if (c.ofdma_lead < 4 * c.dba.cycle) r.fail("ofdma_lead must cover four allocation cycles");

  std::set<std::uint32_t> flow_ids;
  if (auto fl = r.maybe("flows")) {
    for (const Reader& f : fl->items()) {
      FlowSpec spec = read_flow(f);
      known(f.at("sfu"));
      if (!flow_ids.insert(spec.id).second) f.at("id").fail("duplicate flow id " + std::to_string(spec.id));
      c.flows.push_back(spec);
    }
  }
  if (auto of = r.maybe("ofdma")) {
    for (const Reader& o : of->items()) {
      OfdmaSpec spec = read_ofdma(o);
      known(o.at("sfu"));
      if (!flow_ids.insert(spec.flow).second) o.at("flow").fail("duplicate flow id " + std::to_string(spec.flow));
      c.ofdma.push_back(spec);
    }
  }
  if (auto m = r.maybe("management")) read_management(*m, c.management);
  if (auto e = r.maybe("energy")) read_energy(*e, c.energy);
  if (auto ev = r.maybe("events")) {
    for (const Reader& e : ev->items()) {
      FaultEvent fe = read_event(e);
      if (fe.kind == FaultKind::KillSfu || fe.kind == FaultKind::ReviveSfu) known(e.at("sfu"));
      c.events.push_back(fe);
    }
  }
  if (auto o = r.maybe("output")) c.output_dir = o->str();
  return c;
}

}  // namespace

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Downlink: return "downlink";
    case Direction::Uplink: return "uplink";
    case Direction::Local: return "local";
  }
  return "?";
}

const char* to_string(ArrivalModel m) {
  switch (m) {
    case ArrivalModel::Constant: return "constant";
    case ArrivalModel::OnOff: return "on_off";
    case ArrivalModel::Batch: return "batch";
  }
  return "?";
}

const char* to_string(FaultKind k) {
  switch (k) {
    case FaultKind::KillSfu: return "kill_sfu";
    case FaultKind::ReviveSfu: return "revive_sfu";
    case FaultKind::FiberCut: return "fiber_cut";
    case FaultKind::FiberRepair: return "fiber_repair";
  }
  return "?";
}

std::optional<Duration> parse_duration(std::string_view s) {
  auto num = split_number(s);
  if (!num) return std::nullopt;
  const auto [v, unit] = *num;
  double scale = 0;
  if (unit.empty() || unit == "ns") scale = 1;
  else if (unit == "us") scale = 1e3;
  else if (unit == "ms") scale = 1e6;
  else if (unit == "s") scale = 1e9;
  else if (unit == "min") scale = 60e9;
  else if (unit == "h") scale = 3600e9;
  else return std::nullopt;
  auto ns = scaled(v, scale);
  if (!ns) return std::nullopt;
  return Duration{static_cast<std::int64_t>(*ns)};
}

std::optional<std::uint64_t> parse_rate_bps(std::string_view s) {
  auto num = split_number(s);
  if (!num) return std::nullopt;
  const auto [v, unit] = *num;
  double scale = 0;
  if (unit.empty() || unit == "bps") scale = 1;
  else if (unit == "kbps") scale = 1e3;
  else if (unit == "Mbps") scale = 1e6;
  else if (unit == "Gbps") scale = 1e9;
  else return std::nullopt;
  return scaled(v, scale);
}

std::optional<std::uint64_t> parse_size_bytes(std::string_view s) {
  auto num = split_number(s);
  if (!num) return std::nullopt;
  const auto [v, unit] = *num;
  double scale = 0;
  if (unit.empty() || unit == "B") scale = 1;
  else if (unit == "KB") scale = 1e3;
  else if (unit == "MB") scale = 1e6;
  else if (unit == "GB") scale = 1e9;
  else if (unit == "KiB") scale = 1024;
  else if (unit == "MiB") scale = 1024.0 * 1024;
  else return std::nullopt;
  return scaled(v, scale);
}

ScenarioConfig parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError{e.mark.line + 1, e.mark.column + 1, "yaml: " + e.msg};
  }
  if (!root.IsMap()) throw ConfigError{1, 1, "scenario: expected a mapping at the top level"};
  try {
    return read_root(root);
  } catch (const YAML::Exception& e) {
    throw ConfigError{e.mark.line + 1, e.mark.column + 1, "yaml: " + e.msg};
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw ConfigError{0, 0, "cannot open " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void apply_mode(ScenarioConfig& cfg, scheduling::SchedulerMode mode) {
  cfg.mode = mode;
  if (!cfg.latencies_overridden) cfg.latencies = scheduling::default_latencies(mode);
}

std::string scenario_fingerprint(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "h" << c.horizon.count() << ";";
  for (const auto& s : c.sfus)
    o << "s" << to_underlying(s.id) << "," << s.stations << "," << s.iot_resident << "," << s.prop_delay.count() << ";";
  for (const auto& [a, b] : c.conflicts) o << "c" << to_underlying(a) << "-" << to_underlying(b) << ";";
  o << "o" << c.optical_down.bps() << "," << c.optical_up.bps() << ";";
  for (const auto& f : c.flows)
    o << "f" << f.id << "," << to_string(f.direction) << "," << to_underlying(f.sfu) << "," << int(f.service) << ","
      << int(f.priority) << "," << to_string(f.model) << "," << f.rate.bps() << "," << f.on.count() << ","
      << f.off.count() << "," << f.batch_count << "," << f.batch_interval.count() << "," << f.size_min << ","
      << f.size_max << "," << to_ns(f.start) << "," << (f.stop ? to_ns(*f.stop) : -1) << ";";
  for (const auto& x : c.ofdma) {
    o << "u" << x.flow << "," << to_underlying(x.sfu) << "," << x.period.count() << "," << to_ns(x.start);
    for (const auto& ru : x.rus) o << "," << to_underlying(ru.sta) << ":" << ru.ru_bytes;
    o << ";";
  }
  const auto& q = c.management.requests;
  o << "m" << q.count << "," << to_ns(q.start) << "," << q.interval.count() << "," << int(q.kind) << ","
    << int(q.unknown_ids) << ";";
  for (const auto& e : c.events) o << "e" << to_ns(e.at) << "," << to_string(e.kind) << "," << to_underlying(e.sfu) << ";";

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : o.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fttr::scenario
