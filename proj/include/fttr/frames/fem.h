// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fttr/frames/byte_io.h"
#include "fttr/frames/drr.h"
#include "fttr/frames/sdu.h"

namespace fttr::frames {

enum class FemKind : std::uint8_t { Apdu = 0x01, FmciDu = 0x02, WmciDu = 0x03 };

/// Fiber management and control interface data unit.
struct FmciDu {
  Bytes content;
};
/// WLAN management and control interface data unit.
struct WmciDu {
  Bytes content;
};

/// Header: kind(1) sequence(2) length(2); length counts payload bytes only.
inline constexpr std::size_t kFemHeaderBytes = 5;
inline constexpr std::size_t kFemMaxPayload = 0xFFFF;

struct FemFrame {
  FemKind kind = FemKind::Apdu;
  std::uint16_t sequence = 0;
  Bytes payload;

  std::size_t serialized_size() const { return kFemHeaderBytes + payload.size(); }
  friend bool operator==(const FemFrame&, const FemFrame&) = default;
};

FemFrame build_fem_frame(const Apdu& apdu, std::uint16_t sequence);
FemFrame build_fem_frame(const FmciDu& du, std::uint16_t sequence);
FemFrame build_fem_frame(const WmciDu& du, std::uint16_t sequence);

void serialize_fem_frame(const FemFrame& frame, Bytes& out);
Bytes serialize_fem_frame(const FemFrame& frame);
/// Reads one frame from the cursor.
FemFrame read_fem_frame(ByteReader& in);
/// Parses exactly one frame; trailing bytes are a framing error.
FemFrame parse_fem_frame(ByteView bytes);

/// MAC protocol data unit: FEM frames concatenated back to back.
class Mpdu {
 public:
  Mpdu() = default;
  explicit Mpdu(std::vector<FemFrame> frames);

  void append(FemFrame frame);
  const std::vector<FemFrame>& frames() const { return frames_; }
  std::size_t total_len() const { return total_len_; }
  bool empty() const { return frames_.empty(); }

  friend bool operator==(const Mpdu&, const Mpdu&) = default;

 private:
  std::vector<FemFrame> frames_;
  std::size_t total_len_ = 0;
};

Bytes serialize_mpdu(const Mpdu& mpdu);
Mpdu parse_mpdu(ByteView bytes);

/// Per-tag FEM queues scheduled by weighted DRR; control tags are strict.
using FemQueueSet = DeficitRoundRobin<FemFrame>;

inline constexpr std::size_t kDefaultQuantumBytes = 1540;

FemQueueSet make_fem_queue_set(std::size_t quantum_bytes = kDefaultQuantumBytes);

/// Draws frames from `queues` into one MPDU no larger than `budget` bytes.
/// Throws CodecError{InvalidField} if budget < one FEM header.
Mpdu aggregate_mpdu(FemQueueSet& queues, std::size_t budget);

}  // namespace fttr::frames
