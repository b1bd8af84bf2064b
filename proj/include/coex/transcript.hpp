#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coex/bitvec.hpp"

namespace coex {

/// Public-channel message kinds.
enum class MsgType : std::uint8_t {
  WinnowStart = 1,  ///< u32 n | u8 k0 | u8 max_rounds
  Shuffle = 2,      ///< u64 permutation seed
  Parities = 3,     ///< bits: one parity per block (Alice)
  Mismatch = 4,     ///< bits: one flag per block (Bob)
  Syndromes = 5,    ///< bits: concatenated syndromes of flagged blocks (Alice)
  WinnowEnd = 6,    ///< u8 converged | u8 rounds
  Crc = 7,          ///< u64 digest (Alice)
  CrcResult = 8,    ///< u8 match (Bob)
  PaSeed = 9,       ///< u64 seed | u32 output length
  Estimation = 10,  ///< free-form parameter-estimation summary
};

struct Message {
  MsgType type;
  std::vector<std::uint8_t> payload;

  bool operator==(const Message&) const = default;
};

/// Byte helpers for payloads; integers are little-endian, bit strings are
/// u32 length followed by MSB-first packed bytes.
class PayloadWriter {
 public:
  PayloadWriter& u8(std::uint8_t v);
  PayloadWriter& u32(std::uint32_t v);
  PayloadWriter& u64(std::uint64_t v);
  PayloadWriter& bits(const BitVec& b);
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class PayloadReader {
 public:
  explicit PayloadReader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  BitVec bits();
  bool done() const { return pos_ == buf_.size(); }

 private:
  const std::vector<std::uint8_t>& buf_;
  std::size_t pos_ = 0;
};

class TranscriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serialized form: "CXTR" | u16 version=1 | repeated [u8 type][u32 len][payload].
class Transcript {
 public:
  static constexpr std::uint16_t kVersion = 1;

  void append(MsgType type, std::vector<std::uint8_t> payload) {
    messages_.push_back({type, std::move(payload)});
  }
  const std::vector<Message>& messages() const { return messages_; }

  std::vector<std::uint8_t> serialize() const;
  static Transcript parse(const std::vector<std::uint8_t>& bytes);

  bool operator==(const Transcript&) const = default;

 private:
  std::vector<Message> messages_;
};

}  // namespace coex
