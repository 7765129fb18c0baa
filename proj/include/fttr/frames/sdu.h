// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "fttr/frames/byte_io.h"
#include "fttr/sim/time.h"

namespace fttr::frames {

enum class ServiceClass : std::uint8_t { Video = 0, Gaming = 1, Background = 2, Iot = 3, Control = 4 };

const char* to_string(ServiceClass c);
std::optional<ServiceClass> parse_service_class(std::string_view s);

using ClassificationTag = std::uint8_t;

/// Data tags occupy [0, 32): tag = (7 - priority) * 4 + rank, with rank
/// video < gaming < iot < background. Control traffic occupies [32, 40) and
/// is served ahead of all data tags; FMCI/WMCI units ride tag 32.
inline constexpr ClassificationTag kControlTagBase = 32;
inline constexpr ClassificationTag kManagementTag = kControlTagBase;
inline constexpr std::size_t kTagCount = 40;

ClassificationTag classification_tag(std::uint8_t priority, ServiceClass service);
inline bool is_control_tag(ClassificationTag tag) { return tag >= kControlTagBase; }

struct Sdu {
  NodeId dest{};
  std::uint32_t payload_len = 1;
  std::uint8_t priority = 0;  // 0..7, higher is more urgent
  ServiceClass service = ServiceClass::Background;
  SimTime created_at = kTimeZero;
  std::uint32_t flow_id = 0;

  friend bool operator==(const Sdu&, const Sdu&) = default;
};

struct Apdu {
  Sdu inner;
  NodeId target_node{};
  ClassificationTag classification_tag = 0;

  friend bool operator==(const Apdu&, const Apdu&) = default;
};

/// Fixed APDU header: target(2) tag(1) class(1) priority(1) flow(4) created_at(8).
inline constexpr std::size_t kApduHeaderBytes = 17;

/// Throws CodecError{Addressing} if the destination is not in `reachable`,
/// CodecError{InvalidField} for a zero-length payload or priority above 7.
Apdu encapsulate_sdu(const Sdu& sdu, std::span<const NodeId> reachable);

inline std::size_t serialized_size(const Apdu& a) { return kApduHeaderBytes + a.inner.payload_len; }
Bytes encode_apdu(const Apdu& apdu);
Apdu decode_apdu(ByteView bytes);

}  // namespace fttr::frames
