// SPDX-License-Identifier: Apache-2.0
#include "fttr/frames/pcs.h"

#include <algorithm>

namespace fttr::frames {

const char* to_string(PloamKind kind) {
  switch (kind) {
    case PloamKind::Register: return "register";
    case PloamKind::RangingGrant: return "ranging_grant";
    case PloamKind::SleepAllow: return "sleep_allow";
    case PloamKind::WakeCommand: return "wake";
    case PloamKind::DeepSleepCommand: return "deep_sleep";
  }
  return "unknown";
}

bool ploam_targets_known(std::span<const PloamMsg> msgs, std::span<const NodeId> sfus) {
  return std::all_of(msgs.begin(), msgs.end(), [&](const PloamMsg& m) {
    return m.target_sfu == kBroadcast || std::find(sfus.begin(), sfus.end(), m.target_sfu) != sfus.end();
  });
}

std::optional<std::string> tamap_violation(const Tamap& tamap) {
  if (tamap.entries.empty()) return std::nullopt;
  if (tamap.cycle_length.count() <= 0) return "non-empty TAMap with zero cycle length";
  std::size_t omci = 0;
  for (const auto& e : tamap.entries) {
    if (e.duration.count() <= 0) return "entry with non-positive duration";
    if (e.offset.count() < 0 || e.end_offset() > tamap.cycle_length) return "entry exceeds allocation cycle";
    if (e.tcont == kOmciTcont) ++omci;
  }
  if (omci != 1) return "expected exactly one OMCI T-CONT entry, found " + std::to_string(omci);
  std::vector<TamapEntry> sorted = tamap.entries;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.offset < b.offset; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].offset < sorted[i - 1].end_offset())
      return "entries for SFU " + to_string(sorted[i - 1].sfu) + " and SFU " + to_string(sorted[i].sfu) + " overlap";
  }
  return std::nullopt;
}

void write_tamap(const Tamap& tamap, Bytes& out) {
  ByteWriter w{out};
  w.u64(static_cast<std::uint64_t>(to_ns(tamap.cycle_start)));
  w.u32(static_cast<std::uint32_t>(tamap.cycle_length.count()));
  w.u16(static_cast<std::uint16_t>(tamap.entries.size()));
  for (const auto& e : tamap.entries) {
    w.u16(to_underlying(e.sfu));
    w.u32(static_cast<std::uint32_t>(e.offset.count()));
    w.u32(static_cast<std::uint32_t>(e.duration.count()));
    w.u16(static_cast<std::uint16_t>(e.tcont));
  }
}

Tamap read_tamap(ByteReader& in) {
  Tamap t;
  t.cycle_start = at_ns(static_cast<std::int64_t>(in.u64()));
  t.cycle_length = Duration{in.u32()};
  const std::uint16_t n = in.u16();
  t.entries.reserve(n);
  for (std::uint16_t i = 0; i < n; ++i) {
    TamapEntry e;
    e.sfu = NodeId{in.u16()};
    e.offset = Duration{in.u32()};
    e.duration = Duration{in.u32()};
    e.tcont = TcontId{in.u16()};
    t.entries.push_back(e);
  }
  return t;
}

std::size_t pcs_header_size(std::size_t ploam_count, std::size_t tamap_entries) {
  return 1 + kPloamBytes * ploam_count + kTamapFixedBytes + kTamapEntryBytes * tamap_entries + 4 + 4;
}

PcsFrame build_pcs_frame(Mpdu mpdu, std::vector<PloamMsg> ploam, Tamap tamap) {
  if (auto why = tamap_violation(tamap)) throw CodecError{CodecErrc::InvalidTamap, *why};
  if (ploam.size() > 0xFF) throw CodecError{CodecErrc::Oversize, "more than 255 PLOAM messages"};
  if (tamap.entries.size() > 0xFFFF) throw CodecError{CodecErrc::Oversize, "too many TAMap entries"};
  return PcsFrame{std::move(ploam), std::move(tamap), std::move(mpdu)};
}

Bytes serialize_pcs_frame(const PcsFrame& frame) {
  Bytes out;
  out.reserve(serialized_size(frame));
  ByteWriter w{out};
  w.u8(static_cast<std::uint8_t>(frame.ploam.size()));
  for (const auto& m : frame.ploam) {
    w.u8(static_cast<std::uint8_t>(m.kind));
    w.u16(to_underlying(m.target_sfu));
    w.u32(m.arg);
  }
  write_tamap(frame.tamap, out);
  w.u32(static_cast<std::uint32_t>(frame.payload.total_len()));
  w.u32(crc32(out));
  for (const auto& f : frame.payload.frames()) serialize_fem_frame(f, out);
  return out;
}

PcsFrame parse_pcs_frame(ByteView bytes) {
  ByteReader r{bytes};
  PcsFrame f;
  const std::uint8_t n = r.u8();
  for (std::uint8_t i = 0; i < n; ++i) {
    PloamMsg m;
    const std::uint8_t kind = r.u8();
    m.kind = static_cast<PloamKind>(kind);
    m.target_sfu = NodeId{r.u16()};
    m.arg = r.u32();
    f.ploam.push_back(m);
  }
  f.tamap = read_tamap(r);
  const std::uint32_t payload_len = r.u32();
  const std::size_t header_end = r.position();
  const std::uint32_t check = r.u32();
  if (check != crc32(bytes.first(header_end))) throw CodecError{CodecErrc::HeaderCheck, "PCS header check failed"};
  for (const auto& m : f.ploam) {
    const auto k = static_cast<std::uint8_t>(m.kind);
    if (k < 1 || k > 5) throw CodecError{CodecErrc::InvalidField, "unknown PLOAM kind"};
  }
  if (auto why = tamap_violation(f.tamap)) throw CodecError{CodecErrc::InvalidTamap, *why};
  if (r.remaining() != payload_len) throw CodecError{CodecErrc::Framing, "PCS payload length mismatch"};
  f.payload = parse_mpdu(r.take(payload_len));
  return f;
}

}  // namespace fttr::frames
