// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>

#include "fttr/frames/sdu.h"
#include "fttr/sim/time.h"

namespace fttr::energy {

enum class EnergyPolicy : std::uint8_t {
  RfOff,
  TxPowerAdjust,
  LightSleepPolicy,
  DeepSleepPolicy,
  OpticalRateAdaptation,
  GlobalPolicySwitching,
};
const char* to_string(EnergyPolicy p);

enum class LoadClass : std::uint8_t { Idle, Background, Moderate, Bursty };
const char* to_string(LoadClass c);

/// Thresholds on the per-window offered rate: 0 -> idle, < 1 Mb/s background,
/// < 100 Mb/s moderate, otherwise bursty.
LoadClass classify_load(std::uint64_t bytes, Duration window);

inline constexpr Duration kLongIdle = std::chrono::seconds{60};

struct ScenarioFeatures {
  LoadClass load = LoadClass::Idle;
  std::set<frames::ServiceClass> services;
  bool user_activity = false;
  Duration idle_for{0};
  bool iot_resident = false;
  std::uint64_t optical_bytes = 0;
  std::uint64_t wireless_bytes = 0;
  bool predicted_high_load = false;  // from the scenario's prediction schedule
};

/// Rule order: predicted load -> GlobalPolicySwitching; IoT with idle or
/// background load -> RfOff; optical idle with wireless activity ->
/// OpticalRateAdaptation; idle -> DeepSleepPolicy after kLongIdle else
/// LightSleepPolicy; moderate -> TxPowerAdjust; otherwise LightSleepPolicy.
EnergyPolicy select_policy(const ScenarioFeatures& f);

/// Accumulates one SFU's counters over a policy window.
class FeatureTracker {
 public:
  FeatureTracker(SimTime start, bool iot_resident) : window_start_{start}, last_activity_{start}, iot_{iot_resident} {}

  void optical(std::uint64_t bytes, SimTime at, frames::ServiceClass svc);
  void wireless(std::uint64_t bytes, SimTime at, frames::ServiceClass svc);

  /// Closes the window ending at `now` and starts the next one.
  ScenarioFeatures close_window(SimTime now, bool predicted_high_load);

 private:
  void touch(SimTime at, frames::ServiceClass svc);

  SimTime window_start_;
  SimTime last_activity_;
  bool iot_;
  std::uint64_t optical_ = 0;
  std::uint64_t wireless_ = 0;
  std::set<frames::ServiceClass> services_;
};

}  // namespace fttr::energy
