#include "coex/crc64.hpp"

#include <array>

namespace coex {

namespace {

constexpr std::array<std::uint64_t, 256> make_table() {
  std::array<std::uint64_t, 256> t{};
  for (std::uint64_t i = 0; i < 256; ++i) {
    std::uint64_t c = i << 56;
    for (int k = 0; k < 8; ++k) c = (c & (1ULL << 63)) ? (c << 1) ^ kCrc64Poly : c << 1;
    t[i] = c;
  }
  return t;
}

constexpr auto kTable = make_table();

std::uint64_t feed_byte(std::uint64_t crc, std::uint8_t b) {
  return (crc << 8) ^ kTable[((crc >> 56) ^ b) & 0xff];
}

}  // namespace

std::uint64_t crc64(std::span<const std::uint8_t> bytes) {
  std::uint64_t crc = 0;
  for (std::uint8_t b : bytes) crc = feed_byte(crc, b);
  return crc;
}

std::uint64_t crc64(const BitVec& bits) {
  std::uint64_t crc = 0;
  const std::size_t whole = bits.size() / 8;
  const auto& w = bits.words();
  for (std::size_t i = 0; i < whole; ++i)
    crc = feed_byte(crc, static_cast<std::uint8_t>(w[i >> 3] >> (56 - 8 * (i & 7))));
  for (std::size_t i = whole * 8; i < bits.size(); ++i) {
    const bool top = ((crc >> 63) & 1u) != bits.get(i);
    crc <<= 1;
    if (top) crc ^= kCrc64Poly;
  }
  return crc;
}

bool crc64_verify(const BitVec& alice, const BitVec& bob) {
  return alice.size() == bob.size() && crc64(alice) == crc64(bob);
}

}  // namespace coex
