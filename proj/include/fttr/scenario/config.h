// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fttr/energy/power.h"
#include "fttr/frames/sdu.h"
#include "fttr/links/wifi.h"
#include "fttr/scheduling/dba.h"
#include "fttr/scheduling/types.h"
#include "fttr/scheduling/uplink.h"

namespace fttr::scenario {

using namespace std::chrono_literals;

/// Schema problem, with the 1-based position of the offending node.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, int column, const std::string& what)
      : std::runtime_error{what}, line_{line}, column_{column} {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct SfuSpec {
  NodeId id{};
  std::uint16_t stations = 1;
  bool iot_resident = false;
  Duration prop_delay = 250ns;
};

enum class Direction { Downlink, Uplink, Local };
const char* to_string(Direction d);

enum class ArrivalModel { Constant, OnOff, Batch };
const char* to_string(ArrivalModel m);

struct FlowSpec {
  std::uint32_t id = 0;
  Direction direction = Direction::Downlink;
  NodeId sfu{};
  frames::ServiceClass service = frames::ServiceClass::Background;
  std::uint8_t priority = 0;
  ArrivalModel model = ArrivalModel::Constant;
  DataRate rate{};          // constant, on_off
  Duration on{0}, off{0};   // on_off
  std::uint32_t batch_count = 0;  // batch
  Duration batch_interval{0};     // 0 = a single batch
  std::uint32_t size_min = 1500, size_max = 1500;
  SimTime start = kTimeZero;
  std::optional<SimTime> stop;
};

/// Periodic trigger-based uplink round in one cell.
struct OfdmaSpec {
  std::uint32_t flow = 0;
  NodeId sfu{};
  Duration period = 10ms;
  SimTime start = kTimeZero;
  std::vector<scheduling::RuAssignment> rus;
  /// Optical slot requested before the air burst completes.
  bool pre_request = true;
  std::uint64_t per_sta_overhead = frames::kFemHeaderBytes + frames::kApduHeaderBytes;
  std::uint8_t priority = 4;
  frames::ServiceClass service = frames::ServiceClass::Video;
};

enum class OmciRequestKind { Set, Get, Mixed };

/// OLT-originated extended-OMCI requests.
struct OmciLoadSpec {
  std::uint32_t count = 0;
  SimTime start = kTimeZero;
  Duration interval = 100us;
  OmciRequestKind kind = OmciRequestKind::Set;
  /// Extra unmapped SFU ids drawn as targets.
  std::uint8_t unknown_ids = 0;
};

struct ManagementSpec {
  std::uint8_t mfu_port = 1;
  std::uint32_t k_miss = 2;
  Duration poll = 1s;
  Duration olt_latency = 50us;
  OmciLoadSpec requests;
};

struct PhyRelaySpec {
  std::uint64_t sample_rate = 160'000'000;
  std::uint32_t bit_width = 24;
  std::uint64_t buffer_bytes = 4'000'000;
};

struct TimeWindow {
  SimTime from{};
  SimTime to{};
};

struct EnergySpec {
  bool savings = true;
  Duration policy_window = 1s;
  std::uint64_t sleep_buffer_bytes = 2'000'000;
  energy::PowerProfile profile = energy::default_power_profile();
  std::vector<TimeWindow> predicted_high_load;
};

enum class FaultKind { KillSfu, ReviveSfu, FiberCut, FiberRepair };
const char* to_string(FaultKind k);

struct FaultEvent {
  SimTime at{};
  FaultKind kind = FaultKind::KillSfu;
  NodeId sfu{};
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  Duration horizon = 1s;
  scheduling::SchedulerMode mode = scheduling::SchedulerMode::CentralizedCoordinated;

  std::vector<SfuSpec> sfus;
  std::vector<std::pair<NodeId, NodeId>> conflicts;

  DataRate optical_down{1'000'000'000};
  DataRate optical_up{1'000'000'000};
  links::WifiParams wifi;
  std::uint64_t mfu_queue_bytes = 8'000'000;
  std::uint64_t wifi_queue_bytes = 1'000'000;
  std::uint64_t upstream_queue_bytes = 2'000'000;

  Duration status_cycle = 1ms;
  Duration txop_max = 5ms;
  Duration grant_lead = 250us;
  Duration ofdma_lead = 1ms;
  scheduling::DbaParams dba;
  scheduling::ModeLatencies latencies;  // filled from the mode unless overridden
  bool latencies_overridden = false;
  PhyRelaySpec phy_relay;

  std::vector<FlowSpec> flows;
  std::vector<OfdmaSpec> ofdma;
  ManagementSpec management;
  EnergySpec energy;
  std::vector<FaultEvent> events;

  std::string output_dir;  // empty = out/<name>
};

/// Throws ConfigError on any schema, reference or range problem.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& yaml_text);

/// Re-derives mode-dependent defaults after a --mode override.
void apply_mode(ScenarioConfig& cfg, scheduling::SchedulerMode mode);

/// Hash of topology and traffic only: runs that differ in mode, seed,
/// savings or outputs share it and may be compared.
std::string scenario_fingerprint(const ScenarioConfig& cfg);

std::optional<Duration> parse_duration(std::string_view s);
std::optional<std::uint64_t> parse_rate_bps(std::string_view s);
std::optional<std::uint64_t> parse_size_bytes(std::string_view s);

}  // namespace fttr::scenario
