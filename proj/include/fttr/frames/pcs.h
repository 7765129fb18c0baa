// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fttr/frames/byte_io.h"
#include "fttr/frames/fem.h"
#include "fttr/sim/time.h"

namespace fttr::frames {

enum class PloamKind : std::uint8_t {
  Register = 1,
  RangingGrant = 2,
  SleepAllow = 3,
  WakeCommand = 4,
  DeepSleepCommand = 5,
};

const char* to_string(PloamKind kind);

/// kind(1) target(2) arg(4); target may be kBroadcast.
struct PloamMsg {
  PloamKind kind = PloamKind::Register;
  NodeId target_sfu{};
  std::uint32_t arg = 0;

  friend bool operator==(const PloamMsg&, const PloamMsg&) = default;
};
inline constexpr std::size_t kPloamBytes = 7;

/// True when every message targets a known SFU or the broadcast sentinel.
bool ploam_targets_known(std::span<const PloamMsg> msgs, std::span<const NodeId> sfus);

enum class TcontId : std::uint16_t {};
inline constexpr TcontId kOmciTcont{1};
inline constexpr TcontId kDataTcont{2};

/// One upstream burst allocation, relative to the cycle start.
struct TamapEntry {
  NodeId sfu{};
  Duration offset{};
  Duration duration{};
  TcontId tcont = kDataTcont;

  SimTime start(SimTime cycle_start) const { return cycle_start + offset; }
  Duration end_offset() const { return offset + duration; }
  friend bool operator==(const TamapEntry&, const TamapEntry&) = default;
};
inline constexpr std::size_t kTamapEntryBytes = 12;
inline constexpr std::size_t kTamapFixedBytes = 14;  // start(8) length(4) count(2)

/// Upstream time assignment map for one allocation cycle. The OMCI entry is
/// owned by kBroadcast and subdivided into per-SFU sub-slots by the DBA.
struct Tamap {
  SimTime cycle_start = kTimeZero;
  Duration cycle_length{};
  std::vector<TamapEntry> entries;

  friend bool operator==(const Tamap&, const Tamap&) = default;
};

/// Structural check: entries lie inside the cycle, have positive length,
/// never overlap, and a non-empty map carries exactly one OMCI entry.
/// Returns a description of the first problem found.
std::optional<std::string> tamap_violation(const Tamap& tamap);

void write_tamap(const Tamap& tamap, Bytes& out);
Tamap read_tamap(ByteReader& in);

struct PcsFrame {
  std::vector<PloamMsg> ploam;
  Tamap tamap;
  Mpdu payload;

  friend bool operator==(const PcsFrame&, const PcsFrame&) = default;
};

/// ploam_count(1) ploam(7n) tamap(14+12m) payload_len(4) header_check(4)
std::size_t pcs_header_size(std::size_t ploam_count, std::size_t tamap_entries);
inline std::size_t serialized_size(const PcsFrame& f) {
  return pcs_header_size(f.ploam.size(), f.tamap.entries.size()) + f.payload.total_len();
}

/// Refuses (CodecError{InvalidTamap}) a map that fails tamap_violation, and
/// (CodecError{Oversize}) more than 255 PLOAM messages.
PcsFrame build_pcs_frame(Mpdu mpdu, std::vector<PloamMsg> ploam, Tamap tamap);

Bytes serialize_pcs_frame(const PcsFrame& frame);
/// Verifies the header check, the TAMap structure and the payload length.
PcsFrame parse_pcs_frame(ByteView bytes);

}  // namespace fttr::frames
