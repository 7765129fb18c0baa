// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <vector>

#include "fttr/sim/simulator.h"

namespace fttr::sim {
namespace {

constexpr NodeId kA{1};
constexpr NodeId kB{2};

TEST(Simulator, EventAtTimeZeroFiresFirst) {
  Simulator s;
  std::vector<int> order;
  s.schedule(at_ns(10), kA, EventKind::TimerExpiry, [&] { order.push_back(2); });
  s.schedule(at_ns(0), kA, EventKind::TimerExpiry, [&] { order.push_back(1); });
  s.run_until(at_ns(100));
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(Simulator, TiesDispatchInInsertionOrder) {
  Simulator s;
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) s.schedule(at_ns(7), kA, EventKind::FrameArrival, [&, i] { order.push_back(i); });
  s.run_until(at_ns(7));
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Simulator, EventsBeyondHorizonAreNotDispatched) {
  Simulator s;
  bool fired = false;
  s.schedule(at_ns(5), kA, EventKind::TimerExpiry, [&] { fired = true; });
  s.run_until(at_ns(3));
  EXPECT_FALSE(fired);
  EXPECT_EQ(s.now(), at_ns(3));
  EXPECT_EQ(s.counters().pending, 1u);

  s.schedule(at_ns(11), kA, EventKind::TimerExpiry, [] {});  // horizon + 1 after the next run
  s.run_until(at_ns(10));
  EXPECT_TRUE(fired);
  EXPECT_EQ(s.counters().pending, 1u);
}

TEST(Simulator, EmptyQueueParksClockAtHorizon) {
  Simulator s;
  const TraceDigest& d = s.run_until(at_ns(1000));
  EXPECT_EQ(s.now(), at_ns(1000));
  EXPECT_EQ(d, TraceDigest{});
  EXPECT_EQ(d.events(), 0u);
}

TEST(Simulator, HandlersNeverSeeClockRegress) {
  Simulator s{9};
  SimTime last = kTimeZero;
  bool regressed = false;
  std::function<void()> hop = [&] {
    if (s.now() < last) regressed = true;
    last = s.now();
    const auto d = Duration{static_cast<std::int64_t>(s.rng(kA).uniform(0, 50))};
    if (s.now() < at_ns(100'000)) s.schedule_in(d, kA, EventKind::TimerExpiry, hop);
  };
  s.schedule(kTimeZero, kA, EventKind::TimerExpiry, hop);
  s.schedule(kTimeZero, kB, EventKind::TimerExpiry, hop);
  s.run_until(at_ns(200'000));
  EXPECT_FALSE(regressed);
}

TEST(Simulator, EventConservation) {
  Simulator s{3};
  std::vector<EventId> ids;
  for (int i = 0; i < 100; ++i)
    ids.push_back(s.schedule(at_ns(i * 10), NodeId{static_cast<std::uint16_t>(i % 4)}, EventKind::TimerExpiry, [] {}));
  for (int i = 0; i < 100; i += 7) EXPECT_TRUE(s.cancel(ids[i]));
  EXPECT_FALSE(s.cancel(ids[0]));
  s.run_until(at_ns(500));
  const EventCounters c = s.counters();
  EXPECT_EQ(c.scheduled, c.dispatched + c.cancelled + c.pending);
  EXPECT_GT(c.pending, 0u);
  EXPECT_FALSE(s.cancel(ids[1]));  // already dispatched
}

TEST(Simulator, SameSeedSameDigest) {
  auto run = [](std::uint64_t seed) {
    Simulator s{seed};
    std::function<void(NodeId)> tick = [&](NodeId n) {
      const auto gap = Duration{static_cast<std::int64_t>(s.rng(n).uniform(1, 1000))};
      s.schedule_in(gap, n, EventKind::FrameArrival, [&, n] { tick(n); });
    };
    tick(kA);
    tick(kB);
    return s.run_until(at_ns(1'000'000)).value();
  };
  EXPECT_EQ(run(42), run(42));
  EXPECT_NE(run(42), run(43));
}

TEST(SimulatorDeathTest, SchedulingInThePastAborts) {
  EXPECT_DEATH(
      {
        Simulator s;
        s.schedule(at_ns(10), kA, EventKind::TimerExpiry, [&] { s.schedule(at_ns(5), kA, EventKind::TimerExpiry, [] {}); });
        s.run_until(at_ns(20));
      },
      "before now");
}

TEST(RngStream, SameSeedSubstreamAndIndexGiveSameValue) {
  RngStream a{7, 3}, b{7, 3};
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, AddingANodeDoesNotPerturbOthers) {
  Simulator s1{11}, s2{11};
  std::vector<std::uint64_t> x, y;
  for (int i = 0; i < 50; ++i) x.push_back(s1.rng(kA).uniform(0, 1'000'000));
  for (int i = 0; i < 50; ++i) {
    s2.rng(kB).next_u64();
    y.push_back(s2.rng(kA).uniform(0, 1'000'000));
  }
  EXPECT_EQ(x, y);
}

TEST(RngStream, UniformStaysInRange) {
  RngStream r{1, 0};
  for (int i = 0; i < 10000; ++i) {
    const auto v = r.uniform(3, 17);
    ASSERT_GE(v, 3u);
    ASSERT_LE(v, 17u);
  }
  EXPECT_EQ(r.uniform(5, 5), 5u);
}

TEST(DataRate, TransmitTimeIsExactCeiling) {
  EXPECT_EQ(DataRate{1'000'000'000}.transmit_time(1250), Duration{10'000});
  EXPECT_EQ(DataRate{1'000'000'000}.transmit_time(1000), Duration{8'000});
  EXPECT_EQ(DataRate{3'000'000'000}.transmit_time(1), Duration{3});  // 8/3 ns rounds up
  EXPECT_EQ(DataRate{1'000'000'000}.bytes_in(Duration{7'999}), 999u);
}

}  // namespace
}  // namespace fttr::sim
