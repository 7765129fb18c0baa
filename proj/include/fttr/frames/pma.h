// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "fttr/frames/byte_io.h"

namespace fttr::frames {

/// PMA line coding model: additive scrambler (x^7 + x^4 + 1, reset per frame)
/// followed by a verify-only parity code laid out like RS(255,239): every
/// block of up to 239 data bytes is followed by 16 parity bytes.
inline constexpr std::size_t kFecDataBytes = 239;
inline constexpr std::size_t kFecParityBytes = 16;
inline constexpr std::size_t kFecBlockBytes = kFecDataBytes + kFecParityBytes;

enum class PmaDirection { Encode, Decode };

constexpr std::size_t pma_encoded_size(std::size_t n) {
  return n + kFecParityBytes * ((n + kFecDataBytes - 1) / kFecDataBytes);
}

/// Encode: scramble then append parity. Decode: verify and strip parity then
/// descramble; a parity mismatch or malformed block throws CodecError{Corrupted}.
Bytes pma_transform(ByteView frame, PmaDirection direction);

/// Applies the additive scrambler in place; self-inverse.
void scramble(Bytes& data);

}  // namespace fttr::frames
