// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fttr/energy/ledger.h"
#include "fttr/energy/policy.h"
#include "fttr/frames/omci.h"
#include "fttr/frames/pcs.h"
#include "fttr/links/wifi.h"
#include "fttr/management/alarms.h"
#include "fttr/management/mib.h"
#include "fttr/scenario/config.h"
#include "fttr/scenario/metrics.h"
#include "fttr/scheduling/types.h"

namespace fttr::scenario {

/// A runtime invariant failed; name() identifies which.
class InvariantBreach : public std::runtime_error {
 public:
  InvariantBreach(std::string name, const std::string& detail)
      : std::runtime_error{name + ": " + detail}, name_{std::move(name)} {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

inline constexpr NodeId kMfuNode{0};
inline constexpr NodeId kOltNode{0xFFFE};

/// One FTTR premises: MFU (node 0), SFUs, their Wi-Fi cells, the OLT behind
/// a fixed-latency pipe. Built from a scenario and run once.
class FttrNetwork {
 public:
  explicit FttrNetwork(const ScenarioConfig& cfg);
  ~FttrNetwork();
  FttrNetwork(const FttrNetwork&) = delete;
  FttrNetwork& operator=(const FttrNetwork&) = delete;

  /// Runs to the horizon and checks end-of-run invariants.
  /// Throws InvariantBreach on the first violation.
  RunMetrics run();

  /// Called for every emitted TAMap / air grant, in emission order.
  void on_tamap(std::function<void(const frames::Tamap&)> f);
  void on_grant(std::function<void(const scheduling::AirGrant&)> f);
  /// "GRANT ..." / "TAMAP ..." lines; off by default.
  void record_schedule(bool on);
  const std::vector<std::string>& schedule_log() const;

  const management::AlarmLog& alarms() const;
  const management::MibStore& mib(NodeId sfu) const;
  /// Extended-form requests as issued by the OLT.
  const std::vector<frames::OmciMessage>& omci_requests() const;

  struct PowerReport {
    SimTime at{};  // reception at the MFU
    NodeId sfu{};
    energy::PowerState state = energy::PowerState::Active;
    energy::EnergyPolicy policy = energy::EnergyPolicy::LightSleepPolicy;
  };
  const std::vector<PowerReport>& power_reports() const;
  const std::vector<SimTime>& deep_sleep_commands() const;
  const energy::EnergyLedger& ledger() const;
  const links::InterferenceGraph& graph() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fttr::scenario
