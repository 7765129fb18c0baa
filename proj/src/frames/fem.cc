// SPDX-License-Identifier: Apache-2.0
#include "fttr/frames/fem.h"

namespace fttr::frames {

namespace {

FemFrame make_frame(FemKind kind, std::uint16_t sequence, Bytes payload) {
  if (payload.empty()) throw CodecError{CodecErrc::InvalidField, "FEM payload must be at least one byte"};
  if (payload.size() > kFemMaxPayload)
    throw CodecError{CodecErrc::Oversize, "FEM payload of " + std::to_string(payload.size()) + " bytes exceeds 65535"};
  return FemFrame{kind, sequence, std::move(payload)};
}

}  // namespace

FemFrame build_fem_frame(const Apdu& apdu, std::uint16_t sequence) {
  if (serialized_size(apdu) > kFemMaxPayload)
    throw CodecError{CodecErrc::Oversize, "APDU exceeds FEM length field"};
  return make_frame(FemKind::Apdu, sequence, encode_apdu(apdu));
}

FemFrame build_fem_frame(const FmciDu& du, std::uint16_t sequence) {
  return make_frame(FemKind::FmciDu, sequence, du.content);
}

FemFrame build_fem_frame(const WmciDu& du, std::uint16_t sequence) {
  return make_frame(FemKind::WmciDu, sequence, du.content);
}

void serialize_fem_frame(const FemFrame& frame, Bytes& out) {
  if (frame.payload.empty() || frame.payload.size() > kFemMaxPayload)
    throw CodecError{CodecErrc::Oversize, "FEM payload length out of range"};
  ByteWriter w{out};
  w.u8(static_cast<std::uint8_t>(frame.kind));
  w.u16(frame.sequence);
  w.u16(static_cast<std::uint16_t>(frame.payload.size()));
  w.bytes(frame.payload);
}

Bytes serialize_fem_frame(const FemFrame& frame) {
  Bytes out;
  out.reserve(frame.serialized_size());
  serialize_fem_frame(frame, out);
  return out;
}

FemFrame read_fem_frame(ByteReader& in) {
  FemFrame f;
  const std::uint8_t kind = in.u8();
  if (kind < 0x01 || kind > 0x03) throw CodecError{CodecErrc::InvalidField, "unknown FEM kind"};
  f.kind = static_cast<FemKind>(kind);
  f.sequence = in.u16();
  const std::uint16_t len = in.u16();
  if (len == 0) throw CodecError{CodecErrc::Framing, "zero-length FEM frame"};
  ByteView payload = in.take(len);
  f.payload.assign(payload.begin(), payload.end());
  return f;
}

FemFrame parse_fem_frame(ByteView bytes) {
  ByteReader r{bytes};
  FemFrame f = read_fem_frame(r);
  if (!r.done()) throw CodecError{CodecErrc::Framing, "trailing bytes after FEM frame"};
  return f;
}

Mpdu::Mpdu(std::vector<FemFrame> frames) {
  for (auto& f : frames) append(std::move(f));
}

void Mpdu::append(FemFrame frame) {
  total_len_ += frame.serialized_size();
  frames_.push_back(std::move(frame));
}

Bytes serialize_mpdu(const Mpdu& mpdu) {
  Bytes out;
  out.reserve(mpdu.total_len());
  for (const auto& f : mpdu.frames()) serialize_fem_frame(f, out);
  return out;
}

Mpdu parse_mpdu(ByteView bytes) {
  ByteReader r{bytes};
  Mpdu m;
  while (!r.done()) m.append(read_fem_frame(r));
  return m;
}

FemQueueSet make_fem_queue_set(std::size_t quantum_bytes) {
  FemQueueSet q{kTagCount, quantum_bytes, [](const FemFrame& f) { return f.serialized_size(); }, kControlTagBase};
  for (std::size_t tag = 0; tag < kControlTagBase; ++tag) q.set_weight(tag, static_cast<std::uint32_t>(8 - tag / 4));
  return q;
}

Mpdu aggregate_mpdu(FemQueueSet& queues, std::size_t budget) {
  if (budget < kFemHeaderBytes) throw CodecError{CodecErrc::InvalidField, "MPDU budget below one FEM header"};
  return Mpdu{queues.draw(budget)};
}

}  // namespace fttr::frames
