#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "coex/bitvec.hpp"

namespace coex {

/// GF(2)[x] helpers for degree-64 polynomials x^64 + low, low given as a word
/// whose bit i is the coefficient of x^i.
std::uint64_t gf2_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t low);
bool gf2_irreducible64(std::uint64_t low);

/// Bits consumed per authentication key: polynomial, LFSR state, pad.
inline constexpr std::size_t kAuthKeyBits = 192;
inline constexpr int kTagBits = 64;

struct AuthKey {
  std::uint64_t id = 0;
  std::uint64_t epoch = 0;
  std::uint64_t poly_low = 0;  ///< irreducible feedback polynomial
  std::uint64_t state = 0;     ///< non-zero initial LFSR window
  std::uint64_t pad = 0;       ///< one-time pad of the tag
  bool used = false;
};

struct AuthTag {
  std::uint64_t tag = 0;
  std::uint64_t key_id = 0;

  bool operator==(const AuthTag&) const = default;
};

class AuthKeyReuse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AuthFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Key from 192 bits: a 64-bit polynomial candidate (walked forward with a
/// SplitMix step until irreducible), the initial state and the pad.
AuthKey derive_auth_key(std::uint64_t poly_bits, std::uint64_t state_bits, std::uint64_t pad_bits,
                        std::uint64_t id = 0, std::uint64_t epoch = 0);

/// Bit sequence b_0, b_1, ... of the Fibonacci LFSR; the window
/// (b_j .. b_{j+63}) is the hash column of message bit j.
BitVec lfsr_sequence(const AuthKey& key, std::size_t nbits);

/// Tag = pad XOR sum of the LFSR windows at the message's set bits.
std::uint64_t lfsr_toeplitz_hash(const BitVec& message, const AuthKey& key);

/// Same hash from the explicitly expanded 64 x L matrix H[r][j] = b_{j + r}.
std::uint64_t lfsr_toeplitz_hash_naive(const BitVec& message, const AuthKey& key);

/// Tags a message and consumes the key; a second use throws AuthKeyReuse.
AuthTag lfsr_toeplitz_auth(const BitVec& message, AuthKey& key);

/// Checks a tag with the receiver's copy of the key (also consumed).
bool lfsr_toeplitz_verify(const BitVec& message, const AuthTag& tag, AuthKey& key);

/// Pre-shared key material handed out as single-use keys. Replenishing the
/// pool opens a new epoch; keys from older epochs are refused.
class AuthKeyPool {
 public:
  AuthKeyPool() = default;
  AuthKeyPool(BitVec material, std::uint64_t epoch = 0);

  AuthKey next();
  void replenish(BitVec fresh);

  std::uint64_t epoch() const { return epoch_; }
  std::size_t remaining_bits() const { return material_.size() - cursor_; }
  std::uint64_t consumed_bits() const { return consumed_; }
  bool accepts(const AuthKey& key) const { return key.epoch == epoch_; }

 private:
  BitVec material_;
  std::size_t cursor_ = 0;
  std::uint64_t epoch_ = 0;
  std::uint64_t next_id_ = 0;
  std::uint64_t consumed_ = 0;
};

/// Bytes to bits, MSB-first.
BitVec bits_of(std::span<const std::uint8_t> bytes);

}  // namespace coex
