// SPDX-License-Identifier: Apache-2.0
#include "fttr/frames/pma.h"

#include <algorithm>
#include <array>

namespace fttr::frames {

namespace {

using Parity = std::array<std::uint8_t, kFecParityBytes>;

Parity block_parity(ByteView data, std::uint32_t index, bool last) {
  Parity p{};
  Bytes buf;
  buf.reserve(data.size() + 6);
  for (std::uint8_t salt = 0; salt < 4; ++salt) {
    buf.clear();
    ByteWriter w{buf};
    w.u32(index);
    w.u8(last ? 1 : 0);
    w.u8(salt);
    w.bytes(data);
    const std::uint32_t c = crc32(buf);
    for (int b = 0; b < 4; ++b) p[salt * 4 + b] = static_cast<std::uint8_t>(c >> (24 - 8 * b));
  }
  return p;
}

}  // namespace

void scramble(Bytes& data) {
  std::uint8_t state = 0x7F;
  for (auto& byte : data) {
    std::uint8_t key = 0;
    for (int bit = 0; bit < 8; ++bit) {
      const std::uint8_t fb = static_cast<std::uint8_t>(((state >> 6) ^ (state >> 3)) & 1);
      state = static_cast<std::uint8_t>(((state << 1) | fb) & 0x7F);
      key = static_cast<std::uint8_t>((key << 1) | fb);
    }
    byte ^= key;
  }
}

Bytes pma_transform(ByteView frame, PmaDirection direction) {
  if (direction == PmaDirection::Encode) {
    Bytes data(frame.begin(), frame.end());
    scramble(data);
    Bytes out;
    out.reserve(pma_encoded_size(data.size()));
    std::uint32_t index = 0;
    for (std::size_t pos = 0; pos < data.size(); pos += kFecDataBytes, ++index) {
      const std::size_t n = std::min(kFecDataBytes, data.size() - pos);
      ByteView block{data.data() + pos, n};
      out.insert(out.end(), block.begin(), block.end());
      const Parity p = block_parity(block, index, pos + n == data.size());
      out.insert(out.end(), p.begin(), p.end());
    }
    return out;
  }

  Bytes data;
  data.reserve(frame.size());
  std::uint32_t index = 0;
  std::size_t pos = 0;
  while (pos < frame.size()) {
    const std::size_t remaining = frame.size() - pos;
    const bool last = remaining <= kFecBlockBytes;
    const std::size_t block_len = last ? remaining : kFecBlockBytes;
    if (block_len <= kFecParityBytes) throw CodecError{CodecErrc::Corrupted, "PMA block shorter than its parity"};
    ByteView block = frame.subspan(pos, block_len - kFecParityBytes);
    ByteView parity = frame.subspan(pos + block.size(), kFecParityBytes);
    const Parity expect = block_parity(block, index, last);
    if (!std::equal(expect.begin(), expect.end(), parity.begin()))
      throw CodecError{CodecErrc::Corrupted, "PMA parity mismatch in block " + std::to_string(index)};
    data.insert(data.end(), block.begin(), block.end());
    pos += block_len;
    ++index;
  }
  scramble(data);
  return data;
}

}  // namespace fttr::frames
