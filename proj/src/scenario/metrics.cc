// SPDX-License-Identifier: Apache-2.0
#include "fttr/scenario/metrics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace fttr::scenario {

using Json = nlohmann::ordered_json;

std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, double pct) {
  if (sorted.empty()) throw std::invalid_argument{"no samples"};
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

LatencySummary summarize(std::vector<std::int64_t> samples) {
  LatencySummary s;
  s.samples = samples.size();
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  s.p50 = nearest_rank(samples, 50);
  s.p95 = nearest_rank(samples, 95);
  s.p99 = nearest_rank(samples, 99);
  s.max = samples.back();
  return s;
}

const FlowMetrics* RunMetrics::flow(std::uint32_t id) const {
  for (const auto& f : flows)
    if (f.id == id) return &f;
  return nullptr;
}

std::uint64_t RunMetrics::collisions() const {
  std::uint64_t n = 0;
  for (const auto& c : cells) n += c.stats.collisions;
  return n;
}

std::uint64_t RunMetrics::coordination_failures() const {
  std::uint64_t n = 0;
  for (const auto& c : cells) n += c.stats.coordination_failures;
  return n;
}

namespace {

Json latency_json(const LatencySummary& s) {
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"samples", s.samples}, {"p50", opt(s.p50)}, {"p95", opt(s.p95)}, {"p99", opt(s.p99)}, {"max", opt(s.max)}};
}

}  // namespace

std::string summary_json(const RunMetrics& m) {
  Json j;
  j["schema"] = "fttr-summary/1";
  j["scenario"] = m.scenario;
  j["fingerprint"] = m.fingerprint;
  j["seed"] = m.seed;
  j["mode"] = scheduling::to_string(m.mode);
  j["horizon_ns"] = m.horizon.count();
  j["savings"] = m.savings;

  Json totals{{"offered_frames", 0}, {"delivered_frames", 0}, {"lost_frames", 0}, {"pending_frames", 0}};
  Json flows = Json::array();
  for (const auto& f : m.flows) {
    Json x;
    x["id"] = f.id;
    x["direction"] = to_string(f.direction);
    x["sfu"] = to_underlying(f.sfu);
    x["service"] = frames::to_string(f.service);
    x["priority"] = f.priority;
    x["ofdma"] = f.ofdma;
    x["offered_frames"] = f.offered_frames;
    x["offered_bytes"] = f.offered_bytes;
    x["delivered_frames"] = f.delivered_frames;
    x["delivered_bytes"] = f.delivered_bytes;
    x["lost_frames"] = f.lost_frames;
    x["lost_bytes"] = f.lost_bytes;
    x["pending_frames"] = f.pending_frames;
    x["pending_bytes"] = f.pending_bytes;
    x["latency_ns"] = latency_json(f.latency);
    if (f.forwarding_delay) x["forwarding_delay_ns"] = latency_json(*f.forwarding_delay);
    flows.push_back(std::move(x));
    totals["offered_frames"] = totals["offered_frames"].get<std::uint64_t>() + f.offered_frames;
    totals["delivered_frames"] = totals["delivered_frames"].get<std::uint64_t>() + f.delivered_frames;
    totals["lost_frames"] = totals["lost_frames"].get<std::uint64_t>() + f.lost_frames;
    totals["pending_frames"] = totals["pending_frames"].get<std::uint64_t>() + f.pending_frames;
  }
  j["totals"] = totals;
  j["flows"] = flows;

  Json cells = Json::array();
  for (const auto& c : m.cells) {
    cells.push_back({{"sfu", to_underlying(c.sfu)},
                     {"utilization", c.utilization},
                     {"attempts", c.stats.attempts},
                     {"successes", c.stats.successes},
                     {"collisions", c.stats.collisions},
                     {"coordination_failures", c.stats.coordination_failures},
                     {"retry_drops", c.stats.retry_drops},
                     {"bytes_sent", c.stats.bytes_sent},
                     {"bytes_delivered", c.stats.bytes_delivered},
                     {"busy_ns", c.stats.busy.count()}});
  }
  j["wifi"] = {{"collisions", m.collisions()}, {"coordination_failures", m.coordination_failures()}, {"cells", cells}};

  const auto& o = m.optical;
  j["optical"] = {{"down_frames", o.down_frames},
                  {"down_bytes_sent", o.down_bytes_sent},
                  {"down_bytes_delivered", o.down_bytes_delivered},
                  {"down_bytes_lost", o.down_bytes_lost},
                  {"up_bursts", o.up_bursts},
                  {"up_bytes_sent", o.up_bytes_sent},
                  {"up_bytes_delivered", o.up_bytes_delivered},
                  {"up_bytes_dropped", o.up_bytes_dropped},
                  {"slot_violations", o.slot_violations},
                  {"upstream_collisions", o.upstream_collisions},
                  {"cut_losses", o.cut_losses}};

  const auto& s = m.scheduling;
  j["scheduling"] = {{"grants", s.grants},
                     {"trigger_rounds", s.trigger_rounds},
                     {"tamaps", s.tamaps},
                     {"pinned_slots", s.pinned_slots},
                     {"deferred_pins", s.deferred_pins}};

  const auto& l = m.losses;
  j["losses"] = {{"queue_overflow", l.queue_overflow}, {"air", l.air},
                 {"sleep_buffer", l.sleep_buffer},     {"sleep_receiver", l.sleep_receiver},
                 {"link_down", l.link_down},           {"sfu_down", l.sfu_down},
                 {"relay_overflow", l.relay_overflow}, {"upstream", l.upstream}};

  const auto& g = m.management;
  j["management"] = {{"omci_sent", g.sent},
                     {"omci_delivered", g.delivered},
                     {"omci_failed", g.failed},
                     {"omci_pending", g.pending},
                     {"unknown_targets", g.unknown_targets},
                     {"max_upstream_omci_delay_ns", g.max_upstream_delay_ns},
                     {"status_reports", g.status_reports},
                     {"alarms", g.alarms}};

  Json nodes = Json::array();
  for (const auto& n : m.energy.nodes) {
    Json res = Json::object();
    for (const auto& [state, d] : n.residency) res[energy::to_string(state)] = d.count();
    nodes.push_back(
        {{"node", to_underlying(n.node)}, {"type", energy::to_string(n.type)}, {"joules", n.joules}, {"residency_ns", res}});
  }
  j["energy"] = {{"fttr_joules", m.energy.fttr_joules},
                 {"ftth_joules", m.energy.ftth_joules},
                 {"ratio", m.energy.ratio},
                 {"deep_sleep_commands", m.energy.deep_sleep_commands},
                 {"wake_commands", m.energy.wake_commands},
                 {"rejected_transitions", m.energy.rejected_transitions},
                 {"nodes", nodes}};

  j["trace"] = {{"digest", m.digest}, {"events", m.events}};
  return j.dump(2) + "\n";
}

std::string flows_csv(const RunMetrics& m) {
  std::ostringstream os;
  os << "flow,direction,sfu,service,priority,ofdma,offered_frames,offered_bytes,delivered_frames,delivered_bytes,"
        "lost_frames,lost_bytes,pending_frames,pending_bytes,latency_p50_ns,latency_p95_ns,latency_p99_ns,"
        "latency_max_ns\n";
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string{}; };
  for (const auto& f : m.flows) {
    os << f.id << ',' << to_string(f.direction) << ',' << to_underlying(f.sfu) << ',' << frames::to_string(f.service)
       << ',' << unsigned{f.priority} << ',' << (f.ofdma ? 1 : 0) << ',' << f.offered_frames << ',' << f.offered_bytes
       << ',' << f.delivered_frames << ',' << f.delivered_bytes << ',' << f.lost_frames << ',' << f.lost_bytes << ','
       << f.pending_frames << ',' << f.pending_bytes << ',' << opt(f.latency.p50) << ',' << opt(f.latency.p95) << ','
       << opt(f.latency.p99) << ',' << opt(f.latency.max) << '\n';
  }
  return os.str();
}

namespace {

/// Numeric leaves keyed by path; arrays of records are keyed by their id field.
void flatten(const Json& j, const std::string& path, std::map<std::string, double>& out) {
  if (j.is_number()) {
    out[path] = j.get<double>();
    return;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
    return;
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const Json& e = j[i];
      std::string key = std::to_string(i);
      for (const char* idf : {"id", "sfu", "node"})
        if (e.is_object() && e.contains(idf)) {
          key = e[idf].dump();
          break;
        }
      flatten(e, path + "." + key, out);
    }
  }
}

}  // namespace

std::string compare_summaries(const std::string& summary_a, const std::string& summary_b) {
  Json a, b;
  try {
    a = Json::parse(summary_a);
    b = Json::parse(summary_b);
  } catch (const nlohmann::json::exception& e) {
    throw CompareError{std::string{"unreadable summary: "} + e.what()};
  }
  if (!a.contains("fingerprint") || !b.contains("fingerprint")) throw CompareError{"not a summary document"};
  if (a["fingerprint"] != b["fingerprint"])
    throw CompareError{"summaries come from different scenarios (" + a["fingerprint"].get<std::string>() + " vs " +
                       b["fingerprint"].get<std::string>() + ")"};

  std::map<std::string, double> fa, fb;
  for (const char* sec : {"totals", "flows", "wifi", "optical", "scheduling", "losses", "management", "energy"}) {
    if (a.contains(sec)) flatten(a[sec], sec, fa);
    if (b.contains(sec)) flatten(b[sec], sec, fb);
  }

  Json out;
  out["schema"] = "fttr-compare/1";
  out["scenario"] = a.value("scenario", "");
  out["fingerprint"] = a["fingerprint"];
  auto run = [](const Json& s) {
    return Json{{"mode", s.value("mode", "")}, {"seed", s.value("seed", 0)}, {"savings", s.value("savings", true)}};
  };
  out["a"] = run(a);
  out["b"] = run(b);
  Json metrics = Json::array();
  for (const auto& [k, va] : fa) {
    auto it = fb.find(k);
    if (it == fb.end()) continue;
    const double vb = it->second;
    Json r{{"metric", k}, {"a", va}, {"b", vb}, {"delta", vb - va}};
    r["ratio"] = va != 0 ? Json(vb / va) : Json(nullptr);
    metrics.push_back(std::move(r));
  }
  out["metrics"] = metrics;
  return out.dump(2) + "\n";
}

}  // namespace fttr::scenario
