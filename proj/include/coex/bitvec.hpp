#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace coex {

/// Packed bit sequence. Bit i lives in word i / 64 at position 63 - i % 64,
/// so the byte image is MSB-first. Unused tail bits are kept zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

  static BitVec from_string(const std::string& bits);
  static BitVec from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (63 - (i & 63))) & 1u; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (63 - (i & 63));
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (63 - (i & 63)); }
  void push_back(bool v);
  void resize(std::size_t n);

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  /// Bits [pos, pos + 64) as a word, MSB = bit pos; bits past the end read 0.
  std::uint64_t window(std::size_t pos) const;

  std::size_t popcount() const;
  std::vector<std::uint8_t> to_bytes() const;
  std::string to_string() const;

  BitVec& operator^=(const BitVec& o);
  bool operator==(const BitVec& o) const { return size_ == o.size_ && words_ == o.words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

inline BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

}  // namespace coex
