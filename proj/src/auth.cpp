#include "coex/auth.hpp"

#include <bit>
#include <utility>

#include "coex/rng.hpp"

namespace coex {

namespace {

struct U128 {
  std::uint64_t hi = 0, lo = 0;
};

U128 clmul(std::uint64_t a, std::uint64_t b) {
  U128 r;
  for (int i = 0; i < 64; ++i) {
    if (!((b >> i) & 1u)) continue;
    r.lo ^= a << i;
    if (i) r.hi ^= a >> (64 - i);
  }
  return r;
}

/// hi * x^64 + lo modulo x^64 + low.
std::uint64_t reduce(U128 v, std::uint64_t low) {
  while (v.hi) {
    const U128 t = clmul(v.hi, low);
    v.hi = t.hi;
    v.lo ^= t.lo;
  }
  return v.lo;
}

using Poly = unsigned __int128;

int degree(Poly v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi) return 127 - std::countl_zero(hi);
  const auto lo = static_cast<std::uint64_t>(v);
  return lo ? 63 - std::countl_zero(lo) : -1;
}

Poly poly_gcd(Poly a, Poly b) {
  while (b != 0) {
    while (a != 0 && degree(a) >= degree(b)) a ^= b << (degree(a) - degree(b));
    std::swap(a, b);
  }
  return a;
}

std::uint64_t reverse_bits(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int i = 0; i < 64; ++i) r |= ((v >> i) & 1u) << (63 - i);
  return r;
}

std::uint64_t step(std::uint64_t state, std::uint64_t taps) {
  return (state << 1) | static_cast<std::uint64_t>(std::popcount(state & taps) & 1);
}

}  // namespace

std::uint64_t gf2_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t low) {
  return reduce(clmul(a, b), low);
}

bool gf2_irreducible64(std::uint64_t low) {
  if (!(low & 1u)) return false;
  // Rabin: x^(2^64) = x mod f and gcd(x^(2^32) - x, f) = 1.
  const std::uint64_t x = 2;
  std::uint64_t h = x;
  for (int i = 0; i < 32; ++i) h = gf2_mulmod(h, h, low);
  const Poly f = (Poly{1} << 64) | low;
  if (poly_gcd(f, h ^ x) != 1) return false;
  for (int i = 0; i < 32; ++i) h = gf2_mulmod(h, h, low);
  return h == x;
}

AuthKey derive_auth_key(std::uint64_t poly_bits, std::uint64_t state_bits, std::uint64_t pad_bits,
                        std::uint64_t id, std::uint64_t epoch) {
  AuthKey k;
  k.id = id;
  k.epoch = epoch;
  std::uint64_t candidate = poly_bits;
  for (std::uint64_t i = 0; !gf2_irreducible64(candidate); ++i)
    candidate = derive_seed(poly_bits, i);
  k.poly_low = candidate;
  k.state = state_bits ? state_bits : 1;
  k.pad = pad_bits;
  return k;
}

BitVec lfsr_sequence(const AuthKey& key, std::size_t nbits) {
  BitVec out(nbits);
  const std::uint64_t taps = reverse_bits(key.poly_low);
  std::uint64_t s = key.state;
  for (std::size_t i = 0; i < nbits; ++i) {
    if (i < 64) {
      out.set(i, (key.state >> (63 - i)) & 1u);
    } else {
      s = step(s, taps);
      out.set(i, s & 1u);
    }
  }
  return out;
}

std::uint64_t lfsr_toeplitz_hash(const BitVec& message, const AuthKey& key) {
  const std::uint64_t taps = reverse_bits(key.poly_low);
  std::uint64_t s = key.state, acc = 0;
  for (std::size_t j = 0; j < message.size(); ++j) {
    if (message.get(j)) acc ^= s;
    s = step(s, taps);
  }
  return acc ^ key.pad;
}

std::uint64_t lfsr_toeplitz_hash_naive(const BitVec& message, const AuthKey& key) {
  const std::size_t len = message.size();
  const BitVec b = lfsr_sequence(key, len + 63);
  std::uint64_t tag = 0;
  for (int r = 0; r < kTagBits; ++r) {
    bool acc = false;
    for (std::size_t j = 0; j < len; ++j) acc ^= b.get(j + r) && message.get(j);
    if (acc) tag |= std::uint64_t{1} << (63 - r);
  }
  return tag ^ key.pad;
}

AuthTag lfsr_toeplitz_auth(const BitVec& message, AuthKey& key) {
  if (key.used)
    throw AuthKeyReuse("authentication key " + std::to_string(key.id) + " already used in epoch " +
                       std::to_string(key.epoch));
  key.used = true;
  return {lfsr_toeplitz_hash(message, key), key.id};
}

bool lfsr_toeplitz_verify(const BitVec& message, const AuthTag& tag, AuthKey& key) {
  if (tag.key_id != key.id) return false;
  return lfsr_toeplitz_auth(message, key) == tag;
}

AuthKeyPool::AuthKeyPool(BitVec material, std::uint64_t epoch)
    : material_(std::move(material)), epoch_(epoch) {}

AuthKey AuthKeyPool::next() {
  if (remaining_bits() < kAuthKeyBits) throw AuthFailure("authentication key pool exhausted");
  auto word = [&] {
    const std::uint64_t w = material_.window(cursor_);
    cursor_ += 64;
    return w;
  };
  const std::uint64_t p = word(), s = word(), pad = word();
  consumed_ += kAuthKeyBits;
  return derive_auth_key(p, s, pad, next_id_++, epoch_);
}

void AuthKeyPool::replenish(BitVec fresh) {
  material_ = std::move(fresh);
  cursor_ = 0;
  ++epoch_;
}

BitVec bits_of(std::span<const std::uint8_t> bytes) {
  return BitVec::from_bytes(std::vector<std::uint8_t>(bytes.begin(), bytes.end()), bytes.size() * 8);
}

}  // namespace coex
