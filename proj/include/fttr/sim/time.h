// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

namespace fttr {

/// Simulated clock. Integer nanoseconds since simulation start; never wall time.
struct SimClock {
  using rep = std::int64_t;
  using period = std::nano;
  using duration = std::chrono::duration<rep, period>;
  using time_point = std::chrono::time_point<SimClock>;
  static constexpr bool is_steady = true;
};

using Duration = SimClock::duration;
using SimTime = SimClock::time_point;

constexpr SimTime kTimeZero{};
constexpr SimTime kTimeNever{Duration{std::numeric_limits<std::int64_t>::max()}};

constexpr SimTime at_ns(std::int64_t ns) { return SimTime{Duration{ns}}; }
constexpr std::int64_t to_ns(SimTime t) { return t.time_since_epoch().count(); }
constexpr std::int64_t to_ns(Duration d) { return d.count(); }

/// Node addresses. 0xFFFF is reserved as the broadcast sentinel.
enum class NodeId : std::uint16_t {};

constexpr NodeId kBroadcast{0xFFFF};

constexpr std::uint16_t to_underlying(NodeId n) { return static_cast<std::uint16_t>(n); }
inline std::string to_string(NodeId n) { return std::to_string(to_underlying(n)); }

/// A line rate in bits per second. Transmission times are computed exactly in
/// integer arithmetic (bytes * 8e9 / bps, rounded up to the next nanosecond).
class DataRate {
 public:
  constexpr DataRate() = default;
  constexpr explicit DataRate(std::uint64_t bits_per_second) : bps_{bits_per_second} {}

  constexpr std::uint64_t bps() const { return bps_; }

  Duration transmit_time(std::uint64_t bytes) const {
    if (bps_ == 0) return Duration::max();
    const unsigned __int128 num = static_cast<unsigned __int128>(bytes) * 8u * 1'000'000'000u;
    return Duration{static_cast<std::int64_t>((num + bps_ - 1) / bps_)};
  }

  /// Largest byte count whose transmission fits in `window`.
  std::uint64_t bytes_in(Duration window) const {
    if (window.count() <= 0) return 0;
    const unsigned __int128 num = static_cast<unsigned __int128>(window.count()) * bps_;
    return static_cast<std::uint64_t>(num / 8'000'000'000u);
  }

  friend constexpr bool operator==(DataRate, DataRate) = default;

 private:
  std::uint64_t bps_ = 0;
};

}  // namespace fttr

template <>
struct std::hash<fttr::NodeId> {
  std::size_t operator()(fttr::NodeId n) const noexcept { return std::hash<std::uint16_t>{}(fttr::to_underlying(n)); }
};
