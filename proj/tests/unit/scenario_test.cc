// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "fttr/scenario/config.h"
#include "fttr/scenario/metrics.h"
#include "fttr/scenario/network.h"
#include "fttr/scenario/traffic.h"

namespace fttr::scenario {
namespace {

using Json = nlohmann::json;

constexpr const char* kMinimal = R"(name: minimal
seed: 3
horizon: 50ms
topology:
  sfus:
    - {id: 1}
flows:
  - {id: 1, direction: downlink, sfu: 1, service: video, priority: 5, arrival: constant, rate: 20Mbps, size: 1000}
)";

constexpr const char* kBusy = R"(name: busy
seed: 11
horizon: 200ms
topology:
  sfus:
    - {id: 1, stations: 2}
    - {id: 2, stations: 2}
  conflicts:
    - [1, 2]
flows:
  - {id: 1, direction: downlink, sfu: 1, service: video, priority: 5, arrival: constant, rate: 300Mbps, size: 1500}
  - {id: 2, direction: downlink, sfu: 2, service: gaming, priority: 6, arrival: on_off, rate: 200Mbps, on: 20ms, off: 10ms, size: [200, 1500]}
  - {id: 3, direction: uplink, sfu: 2, service: background, priority: 1, arrival: constant, rate: 50Mbps, size: 1200}
  - {id: 4, direction: local, sfu: 1, service: background, priority: 0, arrival: constant, rate: 10Mbps, size: 800}
management:
  requests: {count: 50, start: 10ms, interval: 1ms, kind: mixed}
)";

TEST(Units, Durations) {
  EXPECT_EQ(parse_duration("125us"), Duration{125'000});
  EXPECT_EQ(parse_duration("2s"), Duration{2'000'000'000});
  EXPECT_EQ(parse_duration("64ns"), Duration{64});
  EXPECT_EQ(parse_duration("1.5ms"), Duration{1'500'000});
  EXPECT_FALSE(parse_duration("ten seconds"));
  EXPECT_EQ(parse_duration("5"), Duration{5});  // bare numbers are nanoseconds
  EXPECT_FALSE(parse_duration("5 parsecs"));
}

TEST(Units, RatesAndSizes) {
  EXPECT_EQ(parse_rate_bps("10Gbps"), 10'000'000'000ULL);
  EXPECT_EQ(parse_rate_bps("64kbps"), 64'000ULL);
  EXPECT_EQ(parse_size_bytes("2MB"), 2'000'000ULL);
  EXPECT_EQ(parse_size_bytes("1522"), 1522ULL);
  EXPECT_FALSE(parse_rate_bps("fast"));
}

TEST(Config, MinimalParses) {
  const auto cfg = parse_scenario(kMinimal);
  EXPECT_EQ(cfg.name, "minimal");
  ASSERT_EQ(cfg.sfus.size(), 1u);
  ASSERT_EQ(cfg.flows.size(), 1u);
  EXPECT_EQ(cfg.flows[0].rate.bps(), 20'000'000u);
}

ConfigError error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ConfigError{0, 0, ""};
}

TEST(Config, UnknownKeyReportsItsLine) {
  const auto e = error_of("name: x\nhorizon: 1s\ntopology:\n  sfus:\n    - {id: 1, colour: red}\n");
  EXPECT_EQ(e.line(), 5);
  EXPECT_NE(std::string{e.what()}.find("colour"), std::string::npos);
}

TEST(Config, FlowToUnknownSfuIsRejected) {
  const auto e = error_of(
      "name: x\nhorizon: 1s\ntopology:\n  sfus:\n    - {id: 1}\nflows:\n  - {id: 1, direction: downlink, sfu: 9, arrival: constant, "
      "rate: 1Mbps}\n");
  EXPECT_EQ(e.line(), 7);
}

TEST(Config, BadDurationAndSyntax) {
  EXPECT_EQ(error_of("name: x\nhorizon: soon\ntopology:\n  sfus: [{id: 1}]\n").line(), 2);
  EXPECT_GT(error_of("name: [x\n").line(), 0);
}

TEST(Config, FingerprintIgnoresModeSeedAndSavings) {
  auto a = parse_scenario(kBusy);
  auto b = a;
  b.seed = 99;
  b.energy.savings = !b.energy.savings;
  apply_mode(b, scheduling::SchedulerMode::DistributedBaseline);
  EXPECT_EQ(scenario_fingerprint(a), scenario_fingerprint(b));
  b.flows[0].rate = DataRate{1};
  EXPECT_NE(scenario_fingerprint(a), scenario_fingerprint(b));
}

TEST(Traffic, ConstantRateMatchesArithmetic) {
  FlowSpec f;
  f.id = 1;
  f.rate = DataRate{8'000'000};  // 1000 bytes -> 1 ms
  f.size_min = f.size_max = 1000;
  TrafficSource src{f, 1};
  std::vector<Arrival> out;
  src.pull(SimTime{Duration{100'000'000}}, out);
  ASSERT_EQ(out.size(), 101u);  // 0, 1 ms, ..., 100 ms
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].at, SimTime{Duration{1'000'000 * std::int64_t(i)}});
}

TEST(Traffic, OnOffStaysInsideOnPeriods) {
  FlowSpec f;
  f.id = 2;
  f.model = ArrivalModel::OnOff;
  f.rate = DataRate{8'000'000};
  f.on = Duration{5'000'000};
  f.off = Duration{5'000'000};
  f.size_min = f.size_max = 1000;
  TrafficSource src{f, 1};
  std::vector<Arrival> out;
  src.pull(SimTime{Duration{1'000'000'000}}, out);
  EXPECT_EQ(out.size(), 501u);  // the pull bound is inclusive
  for (const auto& a : out) EXPECT_LT(to_ns(a.at) % 10'000'000, 5'000'000);
}

TEST(Traffic, BatchAndStop) {
  FlowSpec f;
  f.id = 3;
  f.model = ArrivalModel::Batch;
  f.batch_count = 4;
  f.batch_interval = Duration{10'000'000};
  f.stop = SimTime{Duration{35'000'000}};
  TrafficSource src{f, 1};
  std::vector<Arrival> out;
  src.pull(SimTime{Duration{1'000'000'000}}, out);
  EXPECT_EQ(out.size(), 16u);  // batches at 0, 10, 20, 30 ms
}

TEST(Traffic, SizesAreSeededAndInRange) {
  FlowSpec f;
  f.id = 4;
  f.rate = DataRate{100'000'000};
  f.size_min = 64;
  f.size_max = 1500;
  std::vector<Arrival> a, b, c;
  TrafficSource{f, 5}.pull(SimTime{Duration{10'000'000}}, a);
  TrafficSource{f, 5}.pull(SimTime{Duration{10'000'000}}, b);
  TrafficSource{f, 6}.pull(SimTime{Duration{10'000'000}}, c);
  ASSERT_FALSE(a.empty());
  for (const auto& x : a) {
    EXPECT_GE(x.size, 64u);
    EXPECT_LE(x.size, 1500u);
  }
  auto sizes = [](const std::vector<Arrival>& v) {
    std::vector<std::uint32_t> s;
    for (const auto& x : v) s.push_back(x.size);
    return s;
  };
  EXPECT_EQ(sizes(a), sizes(b));
  EXPECT_NE(sizes(a), sizes(c));
}

TEST(Percentiles, NearestRankOracle) {
  std::vector<std::int64_t> v;
  for (int i = 1; i <= 200; ++i) v.push_back(i * 10);
  for (double pct : {1.0, 50.0, 95.0, 99.0, 99.5, 100.0}) {
    const auto rank = static_cast<std::size_t>(std::ceil(pct * 200 / 100));
    EXPECT_EQ(nearest_rank(v, pct), static_cast<std::int64_t>(rank * 10)) << pct;
  }
  EXPECT_EQ(nearest_rank({7}, 99), 7);
  const auto s = summarize({5, 1, 4, 2, 3});
  EXPECT_EQ(s.samples, 5u);
  EXPECT_EQ(*s.p50, 3);
  EXPECT_EQ(*s.max, 5);
  EXPECT_FALSE(summarize({}).p99);
}

RunMetrics run_text(const std::string& text, std::optional<scheduling::SchedulerMode> mode = {}) {
  auto cfg = parse_scenario(text);
  if (mode) apply_mode(cfg, *mode);
  FttrNetwork net{cfg};
  return net.run();
}

TEST(Network, MinimalRunHasOneFlowAndADigest) {
  const auto m = run_text(kMinimal);
  ASSERT_EQ(m.flows.size(), 1u);
  EXPECT_FALSE(m.digest.empty());
  EXPECT_GT(m.flows[0].delivered_frames, 0u);
  EXPECT_EQ(m.flows[0].lost_frames, 0u);
  const auto csv = flows_csv(m);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Network, FlowsConserveFramesInEveryMode) {
  using enum scheduling::SchedulerMode;
  for (auto mode : {DistributedBaseline, CentralizedCoordinated, MacIntegrated, PhyRelay}) {
    const auto m = run_text(kBusy, mode);
    for (const auto& f : m.flows) {
      EXPECT_EQ(f.offered_frames, f.delivered_frames + f.lost_frames + f.pending_frames)
          << scheduling::to_string(mode) << " flow " << f.id;
      EXPECT_EQ(f.offered_bytes, f.delivered_bytes + f.lost_bytes + f.pending_bytes);
      EXPECT_EQ(f.latency.samples, f.delivered_frames);
    }
  }
}

TEST(Network, SameSeedSameSummary) {
  const auto a = summary_json(run_text(kBusy));
  const auto b = summary_json(run_text(kBusy));
  EXPECT_EQ(a, b);
  auto cfg = parse_scenario(kBusy);
  cfg.seed = 12;
  EXPECT_NE(FttrNetwork{cfg}.run().digest, Json::parse(a)["trace"]["digest"].get<std::string>());
}

TEST(Network, RunsOnlyOnce) {
  FttrNetwork net{parse_scenario(kMinimal)};
  net.run();
  EXPECT_THROW(net.run(), std::logic_error);
}

TEST(Network, GrantModesNeverCollide) {
  using enum scheduling::SchedulerMode;
  for (auto mode : {CentralizedCoordinated, MacIntegrated, PhyRelay}) {
    const auto m = run_text(kBusy, mode);
    EXPECT_EQ(m.collisions(), 0u) << scheduling::to_string(mode);
    EXPECT_EQ(m.coordination_failures(), 0u);
    EXPECT_GT(m.scheduling.grants, 0u);
  }
}

TEST(Network, ManagementRequestsAllAnswered) {
  const auto m = run_text(kBusy);
  EXPECT_EQ(m.management.sent, 50u);
  EXPECT_EQ(m.management.delivered + m.management.failed + m.management.pending, 50u);
  EXPECT_EQ(m.management.pending, 0u);
  EXPECT_EQ(m.management.alarms, 0u);
}

TEST(Compare, IdenticalSummariesHaveZeroDeltas) {
  const auto s = summary_json(run_text(kBusy));
  const auto r = Json::parse(compare_summaries(s, s));
  EXPECT_EQ(r["schema"], "fttr-compare/1");
  ASSERT_FALSE(r["metrics"].empty());
  for (const auto& row : r["metrics"]) EXPECT_EQ(row["delta"].get<double>(), 0.0) << row["metric"];
}

TEST(Compare, ModesOfTheSameScenarioCompare) {
  const auto a = summary_json(run_text(kBusy));
  const auto b = summary_json(run_text(kBusy, scheduling::SchedulerMode::DistributedBaseline));
  const auto r = Json::parse(compare_summaries(a, b));
  EXPECT_EQ(r["a"]["mode"], "centralized");
  EXPECT_EQ(r["b"]["mode"], "distributed");
}

TEST(Compare, RefusesDifferentScenarios) {
  const auto a = summary_json(run_text(kBusy));
  const auto b = summary_json(run_text(kMinimal));
  EXPECT_THROW(compare_summaries(a, b), CompareError);
  EXPECT_THROW(compare_summaries(a, "not json"), CompareError);
}

}  // namespace
}  // namespace fttr::scenario
