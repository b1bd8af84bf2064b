#include "coex/transcript.hpp"

namespace coex {

PayloadWriter& PayloadWriter::u8(std::uint8_t v) {
  buf_.push_back(v);
  return *this;
}

PayloadWriter& PayloadWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

PayloadWriter& PayloadWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

PayloadWriter& PayloadWriter::bits(const BitVec& b) {
  u32(static_cast<std::uint32_t>(b.size()));
  const auto bytes = b.to_bytes();
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  return *this;
}

std::uint8_t PayloadReader::u8() {
  if (pos_ + 1 > buf_.size()) throw TranscriptError("payload truncated");
  return buf_[pos_++];
}

std::uint32_t PayloadReader::u32() {
  if (pos_ + 4 > buf_.size()) throw TranscriptError("payload truncated");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | buf_[pos_ + i];
  pos_ += 4;
  return v;
}

std::uint64_t PayloadReader::u64() {
  if (pos_ + 8 > buf_.size()) throw TranscriptError("payload truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf_[pos_ + i];
  pos_ += 8;
  return v;
}

BitVec PayloadReader::bits() {
  const std::uint32_t n = u32();
  const std::size_t nbytes = (static_cast<std::size_t>(n) + 7) / 8;
  if (pos_ + nbytes > buf_.size()) throw TranscriptError("payload truncated");
  std::vector<std::uint8_t> bytes(buf_.begin() + pos_, buf_.begin() + pos_ + nbytes);
  pos_ += nbytes;
  return BitVec::from_bytes(bytes, n);
}

std::vector<std::uint8_t> Transcript::serialize() const {
  PayloadWriter w;
  w.u8('C').u8('X').u8('T').u8('R');
  w.u8(kVersion & 0xff).u8(kVersion >> 8);
  auto out = w.take();
  for (const auto& m : messages_) {
    PayloadWriter h;
    h.u8(static_cast<std::uint8_t>(m.type)).u32(static_cast<std::uint32_t>(m.payload.size()));
    auto head = h.take();
    out.insert(out.end(), head.begin(), head.end());
    out.insert(out.end(), m.payload.begin(), m.payload.end());
  }
  return out;
}

Transcript Transcript::parse(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 6 || bytes[0] != 'C' || bytes[1] != 'X' || bytes[2] != 'T' || bytes[3] != 'R')
    throw TranscriptError("missing transcript magic");
  const std::uint16_t version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kVersion) throw TranscriptError("unsupported transcript version");
  Transcript t;
  std::size_t pos = 6;
  while (pos < bytes.size()) {
    if (pos + 5 > bytes.size()) throw TranscriptError("message header truncated");
    const auto type = static_cast<MsgType>(bytes[pos]);
    std::uint32_t len = 0;
    for (int i = 4; i >= 1; --i) len = (len << 8) | bytes[pos + i];
    pos += 5;
    if (pos + len > bytes.size()) throw TranscriptError("message payload truncated");
    t.append(type, std::vector<std::uint8_t>(bytes.begin() + pos, bytes.begin() + pos + len));
    pos += len;
  }
  return t;
}

}  // namespace coex
