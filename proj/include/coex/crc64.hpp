#pragma once

#include <cstdint>
#include <span>

#include "coex/bitvec.hpp"

namespace coex {

/// CRC-64/ECMA-182: poly 0x42F0E1EBA9EA3693, init 0, no reflection, xorout 0.
inline constexpr std::uint64_t kCrc64Poly = 0x42F0E1EBA9EA3693ULL;

std::uint64_t crc64(std::span<const std::uint8_t> bytes);

/// CRC over a bit sequence fed MSB-first; whole bytes then the trailing bits.
std::uint64_t crc64(const BitVec& bits);

/// Equal lengths and equal digests.
bool crc64_verify(const BitVec& alice, const BitVec& bob);

}  // namespace coex
