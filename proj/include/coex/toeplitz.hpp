#pragma once

#include <cstddef>
#include <cstdint>

#include "coex/bitvec.hpp"

namespace coex {

/// Privacy amplification parameters. The m x n Toeplitz matrix is read from
/// seed (length n + m - 1): seed[0 .. n-1] is the first row,
/// seed[n .. n+m-2] the first column below the diagonal, so
/// T[i][j] = seed[j - i] for j >= i and seed[n + i - j - 1] otherwise.
struct PASpec {
  double pa_factor = 0.0;
  BitVec seed;
  std::size_t input_len = 0;
  std::size_t output_len = 0;
};

/// m = floor(pa_factor * n) and a seed of n + m - 1 bits from a seeded stream.
PASpec make_pa_spec(std::size_t n, double pa_factor, std::uint64_t seed);

/// clamp(estimated / corrected, 0, 1); corrected must be > 0.
double compute_pa_factor(double corrected_rate, double estimated_final_rate);

/// Row-by-column GF(2) product, one bit at a time.
BitVec toeplitz_naive(const BitVec& input, const BitVec& seed, std::size_t m);

/// Word-parallel product over 64 pre-shifted copies of the diagonal vector;
/// rows are split across OpenMP threads.
BitVec toeplitz_hash(const BitVec& input, const BitVec& seed, std::size_t m);
BitVec toeplitz_hash_serial(const BitVec& input, const BitVec& seed, std::size_t m);

BitVec toeplitz_pa(const BitVec& input, const PASpec& spec);

}  // namespace coex
