// SPDX-License-Identifier: Apache-2.0
#include "fttr/energy/policy.h"

#include <algorithm>

namespace fttr::energy {

const char* to_string(EnergyPolicy p) {
  switch (p) {
    case EnergyPolicy::RfOff: return "rf_off";
    case EnergyPolicy::TxPowerAdjust: return "tx_power_adjust";
    case EnergyPolicy::LightSleepPolicy: return "light_sleep";
    case EnergyPolicy::DeepSleepPolicy: return "deep_sleep";
    case EnergyPolicy::OpticalRateAdaptation: return "optical_rate_adaptation";
    case EnergyPolicy::GlobalPolicySwitching: return "global_policy_switching";
  }
  return "unknown";
}

const char* to_string(LoadClass c) {
  switch (c) {
    case LoadClass::Idle: return "idle";
    case LoadClass::Background: return "background";
    case LoadClass::Moderate: return "moderate";
    case LoadClass::Bursty: return "bursty";
  }
  return "unknown";
}

LoadClass classify_load(std::uint64_t bytes, Duration window) {
  if (bytes == 0) return LoadClass::Idle;
  if (window.count() <= 0) return LoadClass::Bursty;
  // bits/s = bytes * 8e9 / window_ns
  const unsigned __int128 bits_per_s = static_cast<unsigned __int128>(bytes) * 8'000'000'000u / window.count();
  if (bits_per_s < 1'000'000) return LoadClass::Background;
  if (bits_per_s < 100'000'000) return LoadClass::Moderate;
  return LoadClass::Bursty;
}

EnergyPolicy select_policy(const ScenarioFeatures& f) {
  if (f.predicted_high_load) return EnergyPolicy::GlobalPolicySwitching;
  const bool iot = f.iot_resident || f.services.count(frames::ServiceClass::Iot) != 0;
  if (iot && (f.load == LoadClass::Idle || f.load == LoadClass::Background)) return EnergyPolicy::RfOff;
  if (f.optical_bytes == 0 && f.wireless_bytes > 0) return EnergyPolicy::OpticalRateAdaptation;
  if (f.load == LoadClass::Idle) return f.idle_for >= kLongIdle ? EnergyPolicy::DeepSleepPolicy : EnergyPolicy::LightSleepPolicy;
  if (f.load == LoadClass::Moderate) return EnergyPolicy::TxPowerAdjust;
  return EnergyPolicy::LightSleepPolicy;
}

void FeatureTracker::touch(SimTime at, frames::ServiceClass svc) {
  last_activity_ = std::max(last_activity_, at);
  services_.insert(svc);
}

void FeatureTracker::optical(std::uint64_t bytes, SimTime at, frames::ServiceClass svc) {
  optical_ += bytes;
  touch(at, svc);
}

void FeatureTracker::wireless(std::uint64_t bytes, SimTime at, frames::ServiceClass svc) {
  wireless_ += bytes;
  touch(at, svc);
}

ScenarioFeatures FeatureTracker::close_window(SimTime now, bool predicted_high_load) {
  ScenarioFeatures f;
  const std::uint64_t offered = std::max(optical_, wireless_);
  f.load = classify_load(offered, now - window_start_);
  f.services = services_;
  f.user_activity = offered > 0;
  f.idle_for = now - last_activity_;
  f.iot_resident = iot_;
  f.optical_bytes = optical_;
  f.wireless_bytes = wireless_;
  f.predicted_high_load = predicted_high_load;
  window_start_ = now;
  optical_ = wireless_ = 0;
  services_.clear();
  return f;
}

}  // namespace fttr::energy
