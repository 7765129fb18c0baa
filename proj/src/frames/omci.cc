// SPDX-License-Identifier: Apache-2.0
#include "fttr/frames/omci.h"

namespace fttr::frames {

Bytes encode_omci(const OmciMessage& msg) {
  if (msg.device_flags & kOmciRoutedFlag)
    throw CodecError{CodecErrc::InvalidField, "device_flags bit 7 is reserved for the routing marker"};
  if (msg.content_len() > kOmciMaxContent) throw CodecError{CodecErrc::Oversize, "OMCI content exceeds 65535 bytes"};

  Bytes out;
  out.reserve(msg.serialized_size());
  ByteWriter w{out};
  w.u16(msg.transaction_id);
  w.u8(msg.msg_type);
  w.u8(static_cast<std::uint8_t>(msg.device_flags | (msg.route ? kOmciRoutedFlag : 0)));
  w.u16(msg.entity_class);
  w.u16(msg.entity_instance);
  w.u16(static_cast<std::uint16_t>(msg.content_len()));
  w.bytes(msg.content);
  if (msg.route) {
    w.u8(msg.route->mfu_port);
    w.u8(msg.route->sfu_id);
  }
  w.u32(crc32(out));
  return out;
}

OmciMessage decode_omci(ByteView bytes) {
  constexpr std::size_t kMin = kOmciHeaderBytes + kOmciLengthBytes + kOmciMicBytes;
  if (bytes.size() < kMin) throw CodecError{CodecErrc::Framing, "OMCI message shorter than its fixed fields"};

  ByteReader r{bytes};
  OmciMessage m;
  m.transaction_id = r.u16();
  m.msg_type = r.u8();
  const std::uint8_t flags = r.u8();
  m.entity_class = r.u16();
  m.entity_instance = r.u16();
  const std::uint16_t content_len = r.u16();
  if (bytes.size() != kMin + content_len) throw CodecError{CodecErrc::Framing, "OMCI content length mismatch"};

  const std::uint32_t mic_expected = crc32(bytes.first(bytes.size() - kOmciMicBytes));
  ByteView content = r.take(content_len);
  if (r.u32() != mic_expected) throw CodecError{CodecErrc::Integrity, "OMCI MIC mismatch"};

  m.device_flags = static_cast<std::uint8_t>(flags & ~kOmciRoutedFlag);
  if (flags & kOmciRoutedFlag) {
    if (content_len < kOmciRouteBytes) throw CodecError{CodecErrc::Framing, "extended OMCI without routing bytes"};
    m.content.assign(content.begin(), content.end() - kOmciRouteBytes);
    m.route = OmciRoute{content[content_len - 2], content[content_len - 1]};
  } else {
    m.content.assign(content.begin(), content.end());
  }
  return m;
}

}  // namespace fttr::frames
