#pragma once

#include <cstddef>
#include <cstdint>

#include "coex/bitvec.hpp"
#include "coex/transcript.hpp"

namespace coex {

struct CorrectedBlock {
  BitVec bits;
  /// Every parity and syndrome bit revealed on the public channel.
  std::uint64_t leaked_bits = 0;
  /// Bits dropped by privacy maintenance; leaked_bits minus the parities of
  /// the final, mismatch-free round.
  std::uint64_t discarded_bits = 0;
  /// Rounds in which at least one parity mismatched.
  int ec_rounds = 0;
  /// Rounds run, including the final check round.
  int rounds = 0;
  /// Set once error verification has passed.
  bool verified = false;
};

struct WinnowOptions {
  int max_rounds = 10;
  std::uint64_t seed = 0;
};

struct WinnowResult {
  CorrectedBlock alice;
  CorrectedBlock bob;
  /// A round ended with every block parity matching.
  bool converged = false;
  Transcript transcript;
};

/// Initial block exponent: floor(log2(0.5 / qber_hint)), at least 1.
int winnow_initial_exponent(double qber_hint);

/// Syndrome width of a block of len bits (ceil(log2(len))).
int winnow_syndrome_width(std::size_t len);

/// XOR of the in-block indices of set bits in [begin, begin + len); index 0
/// is covered only by the block parity.
std::uint64_t hamming_syndrome(const BitVec& bits, std::size_t begin, std::size_t len);

/// Two-party Winnow. Each round shuffles both strings with a fresh seeded
/// permutation, exchanges block parities, corrects mismatched blocks from
/// Hamming syndromes and drops one bit per revealed parity/syndrome bit.
/// Block size starts at 2^k0 and doubles per round. The first round without
/// a mismatch ends the protocol and keeps its bits.
WinnowResult winnow_correct(const BitVec& alice, const BitVec& bob, double qber_hint,
                            const WinnowOptions& options = {});

/// Bob's side rebuilt from his raw bits and the public transcript alone.
CorrectedBlock winnow_replay(const BitVec& bob, const Transcript& transcript);

}  // namespace coex
