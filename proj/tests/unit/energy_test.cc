// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "fttr/energy/ledger.h"
#include "fttr/energy/policy.h"
#include "fttr/energy/power.h"
#include "fttr/energy/sfu_power.h"

namespace fttr::energy {
namespace {

using namespace std::chrono_literals;
using enum PowerState;

constexpr NodeId kS{1};

TEST(PowerTransitions, TableMatchesOracle) {
  const std::set<std::pair<PowerState, PowerState>> legal{
      {Active, Idle},     {Idle, Active},      {Active, ReducedTx},  {ReducedTx, Active}, {ReducedTx, Idle},
      {Idle, ReducedTx},  {Idle, LightSleep},  {Idle, RfOff},        {RfOff, Active},     {RfOff, Idle},
      {LightSleep, DeepSleep}, {LightSleep, Idle}, {DeepSleep, Idle}};
  for (auto a : {Active, Idle, LightSleep, DeepSleep, RfOff, ReducedTx})
    for (auto b : {Active, Idle, LightSleep, DeepSleep, RfOff, ReducedTx})
      EXPECT_EQ(legal_transition(a, b), legal.count({a, b}) == 1) << to_string(a) << "->" << to_string(b);
}

TEST(PowerProfile, DefaultsAreConsistent) {
  EXPECT_FALSE(power_profile_violation(default_power_profile()));
  auto p = default_power_profile();
  p.sfu[DeepSleep] = 0;
  EXPECT_TRUE(power_profile_violation(p));
}

TEST(SfuPowerMachine, InactivityLeadsToLightSleep) {
  const PowerProfile prof = default_power_profile();
  EnergyLedger ledger;
  SfuPowerMachine m{kS, prof, false, true, ledger, kTimeZero};
  std::vector<PowerState> seen{m.state()};
  for (int guard = 0; guard < 5; ++guard) {
    auto due = m.next_deadline();
    if (!due) break;
    if (auto s = m.on_timer(*due)) seen.push_back(*s);
  }
  EXPECT_EQ(seen, (std::vector<PowerState>{Active, Idle, LightSleep}));
  EXPECT_EQ(m.entered_at(), kTimeZero + prof.t_act_idle + prof.t_idle_sleep);
}

TEST(SfuPowerMachine, FrameDuringIdleReactivatesAndResetsTimers) {
  const PowerProfile prof = default_power_profile();
  EnergyLedger ledger;
  SfuPowerMachine m{kS, prof, false, true, ledger, kTimeZero};
  m.on_timer(kTimeZero + prof.t_act_idle);
  ASSERT_EQ(m.state(), Idle);
  const SimTime t = kTimeZero + 5s;
  EXPECT_TRUE(m.activity(t));
  EXPECT_EQ(m.state(), Active);
  EXPECT_EQ(m.next_deadline(), t + prof.t_act_idle);
}

TEST(SfuPowerMachine, DeepSleepWhileActiveIsRejected) {
  const PowerProfile prof = default_power_profile();
  EnergyLedger ledger;
  SfuPowerMachine m{kS, prof, false, true, ledger, kTimeZero};
  EXPECT_FALSE(m.request(DeepSleep, kTimeZero + 1ms));
  EXPECT_EQ(m.rejected(), 1u);
  EXPECT_EQ(m.state(), Active);
}

TEST(SfuPowerMachine, IotResidentUsesRfOffNeverSleep) {
  const PowerProfile prof = default_power_profile();
  EnergyLedger ledger;
  SfuPowerMachine m{kS, prof, true, true, ledger, kTimeZero};
  m.on_timer(kTimeZero + prof.t_act_idle);
  m.on_timer(kTimeZero + prof.t_act_idle + prof.t_idle_sleep);
  EXPECT_EQ(m.state(), RfOff);
  EXPECT_FALSE(m.request(Idle, kTimeZero + 20s) && m.request(LightSleep, kTimeZero + 20s));
  EXPECT_NE(m.state(), LightSleep);
}

TEST(SfuPowerMachine, SavingsDisabledStaysActiveOrIdle) {
  const PowerProfile prof = default_power_profile();
  EnergyLedger ledger;
  SfuPowerMachine m{kS, prof, false, false, ledger, kTimeZero};
  m.on_timer(kTimeZero + prof.t_act_idle);
  EXPECT_EQ(m.state(), Idle);
  EXPECT_FALSE(m.next_deadline());
  m.set_policy(EnergyPolicy::TxPowerAdjust, kTimeZero + 1s);
  m.activity(kTimeZero + 2s);
  EXPECT_EQ(m.state(), Active);
}

TEST(SfuPowerMachine, TxPowerAdjustUsesReducedTx) {
  const PowerProfile prof = default_power_profile();
  EnergyLedger ledger;
  SfuPowerMachine m{kS, prof, false, true, ledger, kTimeZero};
  m.set_policy(EnergyPolicy::TxPowerAdjust, kTimeZero + 1ms);
  EXPECT_EQ(m.state(), ReducedTx);
  m.set_policy(EnergyPolicy::LightSleepPolicy, kTimeZero + 2ms);
  EXPECT_EQ(m.state(), Active);
}

TEST(DeepSleepCoordination, RequiresEverySfuInLightSleep) {
  std::map<NodeId, SleepReport> r;
  for (std::uint16_t i = 1; i <= 4; ++i) r[NodeId{i}] = {LightSleep, EnergyPolicy::DeepSleepPolicy};
  r[NodeId{4}].state = Idle;
  EXPECT_FALSE(deep_sleep_allowed(r, 4));
  r[NodeId{4}].state = LightSleep;
  EXPECT_TRUE(deep_sleep_allowed(r, 4));
  EXPECT_FALSE(deep_sleep_allowed(r, 5));  // one SFU never reported
  r[NodeId{2}].policy = EnergyPolicy::LightSleepPolicy;
  EXPECT_FALSE(deep_sleep_allowed(r, 4));
}

TEST(DeepSleepCoordination, WakeDelayBoundedByListenInterval) {
  // Hand trace: frames every 125 us; activity at any phase must be answered
  // in the first frame that falls inside a listen window.
  const Duration listen = 1s, window = 10ms, frame = 125us;
  const SimTime enter = kTimeZero + 3s;
  Duration worst{0};
  for (std::int64_t phase_us = 0; phase_us < 2'000'000; phase_us += 997) {
    const SimTime activity = enter + std::chrono::microseconds{phase_us};
    SimTime f = kTimeZero + frame * ((activity - kTimeZero) / frame + 1);
    while (!in_listen_window(enter, f, listen, window)) f += frame;
    worst = std::max(worst, f - activity);
  }
  EXPECT_LE(worst, listen);
  EXPECT_GT(worst, listen - window - frame);
}

TEST(Policy, TableRows) {
  ScenarioFeatures idle_long;
  idle_long.load = LoadClass::Idle;
  idle_long.idle_for = 10min;
  EXPECT_EQ(select_policy(idle_long), EnergyPolicy::DeepSleepPolicy);

  ScenarioFeatures idle_short = idle_long;
  idle_short.idle_for = 59s;
  EXPECT_EQ(select_policy(idle_short), EnergyPolicy::LightSleepPolicy);

  ScenarioFeatures iot;
  iot.load = LoadClass::Background;
  iot.services = {frames::ServiceClass::Iot};
  iot.optical_bytes = iot.wireless_bytes = 100;
  EXPECT_EQ(select_policy(iot), EnergyPolicy::RfOff);
  iot.load = LoadClass::Idle;
  iot.idle_for = 10min;
  EXPECT_EQ(select_policy(iot), EnergyPolicy::RfOff);

  ScenarioFeatures moderate;
  moderate.load = LoadClass::Moderate;
  moderate.optical_bytes = moderate.wireless_bytes = 1'000'000;
  EXPECT_EQ(select_policy(moderate), EnergyPolicy::TxPowerAdjust);

  ScenarioFeatures local = moderate;
  local.optical_bytes = 0;
  EXPECT_EQ(select_policy(local), EnergyPolicy::OpticalRateAdaptation);

  ScenarioFeatures predicted = moderate;
  predicted.predicted_high_load = true;
  EXPECT_EQ(select_policy(predicted), EnergyPolicy::GlobalPolicySwitching);
}

TEST(Policy, LoadThresholds) {
  EXPECT_EQ(classify_load(0, 1s), LoadClass::Idle);
  EXPECT_EQ(classify_load(124'999, 1s), LoadClass::Background);  // 999,992 b/s
  EXPECT_EQ(classify_load(125'000, 1s), LoadClass::Moderate);
  EXPECT_EQ(classify_load(12'499'999, 1s), LoadClass::Moderate);
  EXPECT_EQ(classify_load(12'500'000, 1s), LoadClass::Bursty);
}

TEST(FeatureTracker, WindowCounters) {
  FeatureTracker t{kTimeZero, false};
  t.optical(1000, kTimeZero + 100ms, frames::ServiceClass::Video);
  auto f = t.close_window(kTimeZero + 1s, false);
  EXPECT_EQ(f.load, LoadClass::Background);
  EXPECT_EQ(f.idle_for, 900ms);
  auto g = t.close_window(kTimeZero + 2s, false);
  EXPECT_EQ(g.load, LoadClass::Idle);
  EXPECT_EQ(g.idle_for, 1900ms);
}

TEST(SleepBuffer, OrderPreservedWhenAmple) {
  SleepBuffer<int> b{10'000, [](int) { return std::size_t{100}; }};
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(b.push(i).empty());
  const auto out = b.flush();
  EXPECT_EQ(std::vector<int>(out.begin(), out.end()), (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(b.dropped_frames(), 0u);
}

TEST(SleepBuffer, LossEqualsArithmeticExcess) {
  for (int arrivals : {0, 5, 10, 11, 37}) {
    const int capacity_frames = 10;
    SleepBuffer<int> b{static_cast<std::size_t>(capacity_frames) * 100, [](int) { return std::size_t{100}; }};
    for (int i = 0; i < arrivals; ++i) b.push(i);
    EXPECT_EQ(b.dropped_frames(), static_cast<std::uint64_t>(std::max(0, arrivals - capacity_frames)));
    if (arrivals > 0) EXPECT_EQ(b.flush().back(), arrivals - 1);  // newest kept
  }
}

TEST(EnergyLedger, IntervalArithmetic) {
  EnergyLedger l;
  l.add_node(kS, NodeType::Sfu, Active, 5.0, kTimeZero);
  l.enter(kS, LightSleep, 1.0, kTimeZero + 10s);
  l.close(kTimeZero + 100s);
  EXPECT_DOUBLE_EQ(l.joules(kS), 140.0);
  EXPECT_FALSE(l.partition_violation(kTimeZero + 100s));
  EXPECT_TRUE(l.partition_violation(kTimeZero + 101s));
  EXPECT_EQ(l.residency(kS).at(LightSleep), 90s);
}

TEST(EnergyLedger, CalibrationRatioClosedForm) {
  const PowerProfile p = default_power_profile();
  EnergyLedger l;
  const SimTime h = kTimeZero + 3600s;
  l.add_node(NodeId{0}, NodeType::Mfu, Active, p.mfu[Active], kTimeZero);
  for (std::uint16_t i = 1; i <= 3; ++i) l.add_node(NodeId{i}, NodeType::Sfu, Active, p.sfu[Active], kTimeZero);
  l.close(h);
  const double ratio = l.total_joules() / ftth_baseline_joules(l.intervals(NodeId{0}), p);
  EXPECT_DOUBLE_EQ(ratio, (12.0 + 3 * 6.0) / 20.0);
  EXPECT_GE(ratio, 1.4);
  EXPECT_LE(ratio, 1.6);
}

}  // namespace
}  // namespace fttr::energy
