// SPDX-License-Identifier: Apache-2.0
#include "fttr/frames/byte_io.h"

#include <boost/crc.hpp>

namespace fttr::frames {

const char* to_string(CodecErrc code) {
  switch (code) {
    case CodecErrc::Truncated: return "truncated";
    case CodecErrc::Oversize: return "oversize";
    case CodecErrc::InvalidField: return "invalid_field";
    case CodecErrc::HeaderCheck: return "header_check";
    case CodecErrc::Integrity: return "integrity";
    case CodecErrc::Framing: return "framing";
    case CodecErrc::InvalidTamap: return "invalid_tamap";
    case CodecErrc::Addressing: return "addressing";
    case CodecErrc::Corrupted: return "corrupted";
  }
  return "unknown";
}

std::uint32_t crc32(ByteView data) {
  boost::crc_32_type crc;
  crc.process_bytes(data.data(), data.size());
  return crc.checksum();
}

}  // namespace fttr::frames
