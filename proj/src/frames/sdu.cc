// SPDX-License-Identifier: Apache-2.0
#include "fttr/frames/sdu.h"

#include <algorithm>

namespace fttr::frames {

const char* to_string(ServiceClass c) {
  switch (c) {
    case ServiceClass::Video: return "video";
    case ServiceClass::Gaming: return "gaming";
    case ServiceClass::Background: return "background";
    case ServiceClass::Iot: return "iot";
    case ServiceClass::Control: return "control";
  }
  return "unknown";
}

std::optional<ServiceClass> parse_service_class(std::string_view s) {
  for (auto c : {ServiceClass::Video, ServiceClass::Gaming, ServiceClass::Background, ServiceClass::Iot,
                 ServiceClass::Control}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

namespace {

std::uint8_t data_rank(ServiceClass c) {
  switch (c) {
    case ServiceClass::Video: return 0;
    case ServiceClass::Gaming: return 1;
    case ServiceClass::Iot: return 2;
    case ServiceClass::Background: return 3;
    case ServiceClass::Control: break;
  }
  return 0;
}

void check_sdu(const Sdu& sdu) {
  if (sdu.payload_len == 0) throw CodecError{CodecErrc::InvalidField, "SDU payload must be at least one byte"};
  if (sdu.priority > 7) throw CodecError{CodecErrc::InvalidField, "SDU priority out of range"};
  if (static_cast<std::uint8_t>(sdu.service) > static_cast<std::uint8_t>(ServiceClass::Control))
    throw CodecError{CodecErrc::InvalidField, "unknown service class"};
}

}  // namespace

ClassificationTag classification_tag(std::uint8_t priority, ServiceClass service) {
  const auto inverted = static_cast<std::uint8_t>(7 - std::min<std::uint8_t>(priority, 7));
  if (service == ServiceClass::Control) return static_cast<ClassificationTag>(kControlTagBase + inverted);
  return static_cast<ClassificationTag>(inverted * 4 + data_rank(service));
}

Apdu encapsulate_sdu(const Sdu& sdu, std::span<const NodeId> reachable) {
  check_sdu(sdu);
  if (std::find(reachable.begin(), reachable.end(), sdu.dest) == reachable.end())
    throw CodecError{CodecErrc::Addressing, "unknown destination node " + to_string(sdu.dest)};
  return Apdu{sdu, sdu.dest, classification_tag(sdu.priority, sdu.service)};
}

Bytes encode_apdu(const Apdu& apdu) {
  check_sdu(apdu.inner);
  Bytes out;
  out.reserve(serialized_size(apdu));
  ByteWriter w{out};
  w.u16(to_underlying(apdu.target_node));
  w.u8(apdu.classification_tag);
  w.u8(static_cast<std::uint8_t>(apdu.inner.service));
  w.u8(apdu.inner.priority);
  w.u32(apdu.inner.flow_id);
  w.u64(static_cast<std::uint64_t>(to_ns(apdu.inner.created_at)));
  // Application bytes are synthetic: a pattern keyed on the flow id.
  for (std::uint32_t i = 0; i < apdu.inner.payload_len; ++i)
    out.push_back(static_cast<std::uint8_t>((apdu.inner.flow_id + i) & 0xFF));
  return out;
}

Apdu decode_apdu(ByteView bytes) {
  ByteReader r{bytes};
  Apdu a;
  a.target_node = NodeId{r.u16()};
  a.classification_tag = r.u8();
  const std::uint8_t cls = r.u8();
  if (cls > static_cast<std::uint8_t>(ServiceClass::Control))
    throw CodecError{CodecErrc::InvalidField, "unknown service class"};
  a.inner.service = static_cast<ServiceClass>(cls);
  a.inner.priority = r.u8();
  a.inner.flow_id = r.u32();
  a.inner.created_at = at_ns(static_cast<std::int64_t>(r.u64()));
  a.inner.payload_len = static_cast<std::uint32_t>(r.remaining());
  a.inner.dest = a.target_node;
  check_sdu(a.inner);
  if (a.classification_tag != classification_tag(a.inner.priority, a.inner.service))
    throw CodecError{CodecErrc::InvalidField, "classification tag does not match priority/class"};
  return a;
}

}  // namespace fttr::frames
