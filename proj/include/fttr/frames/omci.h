// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "fttr/frames/byte_io.h"

namespace fttr::frames {

namespace omci_type {
inline constexpr std::uint8_t kCreate = 0x04;
inline constexpr std::uint8_t kSet = 0x08;
inline constexpr std::uint8_t kGet = 0x09;
inline constexpr std::uint8_t kAlarm = 0x10;
inline constexpr std::uint8_t kResponseBit = 0x20;
}  // namespace omci_type

namespace omci_result {
inline constexpr std::uint8_t kSuccess = 0x00;
inline constexpr std::uint8_t kProcessingError = 0x01;
inline constexpr std::uint8_t kUnknownEntity = 0x05;
inline constexpr std::uint8_t kUnknownTarget = 0x06;  // adapter could not route
}  // namespace omci_result

/// Routing trailer of the extended form: MFU port id and SFU id.
struct OmciRoute {
  std::uint8_t mfu_port = 0;
  std::uint8_t sfu_id = 0;
  friend bool operator==(const OmciRoute&, const OmciRoute&) = default;
};

/// Bit 7 of the device_flags byte marks the extended (routed) form on the wire.
inline constexpr std::uint8_t kOmciRoutedFlag = 0x80;
inline constexpr std::size_t kOmciHeaderBytes = 8;
inline constexpr std::size_t kOmciLengthBytes = 2;
inline constexpr std::size_t kOmciMicBytes = 4;
inline constexpr std::size_t kOmciRouteBytes = 2;
inline constexpr std::size_t kOmciMaxContent = 0xFFFF;

/// Wire layout:
///   tid(2) type(1) device_flags(1) entity_class(2) entity_instance(2)
///   content_len(2) content(content_len) mic(4)
/// In the extended form the final two content bytes are {mfu_port, sfu_id}
/// and count toward content_len. The MIC is CRC-32 over everything before it.
struct OmciMessage {
  std::uint16_t transaction_id = 0;
  std::uint8_t msg_type = 0;
  std::uint8_t device_flags = 0;  // bit 7 is reserved for kOmciRoutedFlag
  std::uint16_t entity_class = 0;
  std::uint16_t entity_instance = 0;
  Bytes content;  // application content, without the routing trailer
  std::optional<OmciRoute> route;

  bool extended() const { return route.has_value(); }
  std::size_t content_len() const { return content.size() + (route ? kOmciRouteBytes : 0); }
  std::size_t serialized_size() const {
    return kOmciHeaderBytes + kOmciLengthBytes + content_len() + kOmciMicBytes;
  }

  friend bool operator==(const OmciMessage&, const OmciMessage&) = default;
};

/// Throws CodecError{InvalidField} if device_flags uses the reserved bit and
/// CodecError{Oversize} if content_len would not fit in 16 bits.
Bytes encode_omci(const OmciMessage& msg);
/// Throws CodecError{Integrity} on a MIC mismatch, CodecError{Framing} when
/// content_len disagrees with the buffer size.
OmciMessage decode_omci(ByteView bytes);

}  // namespace fttr::frames
