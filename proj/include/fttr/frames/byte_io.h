// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fttr::frames {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class CodecErrc {
  Truncated,
  Oversize,
  InvalidField,
  HeaderCheck,
  Integrity,
  Framing,
  InvalidTamap,
  Addressing,
  Corrupted,
};

const char* to_string(CodecErrc code);

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrc code, const std::string& what) : std::runtime_error{what}, code_{code} {}
  CodecErrc code() const { return code_; }

 private:
  CodecErrc code_;
};

/// Big-endian appender.
class ByteWriter {
 public:
  explicit ByteWriter(Bytes& out) : out_{out} {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void bytes(ByteView v) { out_.insert(out_.end(), v.begin(), v.end()); }

  std::size_t size() const { return out_.size(); }

 private:
  Bytes& out_;
};

/// Big-endian cursor over a byte span. Reading past the end throws Truncated.
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_{in} {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>((in_[pos_] << 8) | in_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_ + i];
    pos_ += 8;
    return v;
  }
  ByteView take(std::size_t n) {
    need(n);
    ByteView v = in_.subspan(pos_, n);
    pos_ += n;
    return v;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw CodecError{CodecErrc::Truncated, "truncated input"};
  }

  ByteView in_;
  std::size_t pos_ = 0;
};

/// CRC-32 (IEEE 802.3 polynomial, reflected, init/xorout 0xFFFFFFFF).
std::uint32_t crc32(ByteView data);

}  // namespace fttr::frames
