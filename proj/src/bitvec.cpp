#include "coex/bitvec.hpp"

#include <bit>
#include <stdexcept>

namespace coex {

BitVec BitVec::from_string(const std::string& bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw std::invalid_argument("bit string holds non-binary digit");
    v.set(i, bits[i] == '1');
  }
  return v;
}

BitVec BitVec::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
  if (bytes.size() * 8 < nbits) throw std::invalid_argument("byte buffer shorter than bit count");
  BitVec v(nbits);
  for (std::size_t i = 0; i < nbits; ++i) v.set(i, (bytes[i >> 3] >> (7 - (i & 7))) & 1u);
  return v;
}

void BitVec::push_back(bool v) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  set(size_ - 1, v);
}

void BitVec::resize(std::size_t n) {
  words_.resize((n + 63) / 64, 0);
  size_ = n;
  if (n & 63) words_.back() &= ~std::uint64_t{0} << (64 - (n & 63));
}

std::uint64_t BitVec::window(std::size_t pos) const {
  const std::size_t w = pos >> 6;
  const unsigned off = pos & 63;
  const std::uint64_t hi = w < words_.size() ? words_[w] : 0;
  if (off == 0) return hi;
  const std::uint64_t lo = w + 1 < words_.size() ? words_[w + 1] : 0;
  return (hi << off) | (lo >> (64 - off));
}

std::size_t BitVec::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::vector<std::uint8_t> BitVec::to_bytes() const {
  std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> (56 - 8 * (i & 7)));
  return out;
}

std::string BitVec::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitVec& BitVec::operator^=(const BitVec& o) {
  if (o.size_ != size_) throw std::invalid_argument("xor of bit vectors with unequal lengths");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

}  // namespace coex
