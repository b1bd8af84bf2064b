#include "coex/toeplitz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "coex/rng.hpp"

namespace coex {

namespace {

std::size_t seed_len(std::size_t n, std::size_t m) { return n + m == 0 ? 0 : n + m - 1; }

void check(const BitVec& input, const BitVec& seed, std::size_t m) {
  if (m > input.size()) throw std::invalid_argument("Toeplitz output longer than input");
  if (seed.size() != seed_len(input.size(), m))
    throw std::invalid_argument("Toeplitz seed must hold n + m - 1 bits");
}

/// Diagonal vector c with T[i][j] = c[m - 1 + j - i].
BitVec diagonals(const BitVec& seed, std::size_t n, std::size_t m) {
  BitVec c(n + m - 1);
  for (std::size_t d = 0; d < n; ++d)
    if (seed.get(d)) c.set(m - 1 + d, true);
  for (std::size_t k = 1; k < m; ++k)
    if (seed.get(n + k - 1)) c.set(m - 1 - k, true);
  return c;
}

template <bool Parallel>
BitVec hash_impl(const BitVec& input, const BitVec& seed, std::size_t m) {
  check(input, seed, m);
  const std::size_t n = input.size();
  BitVec out(m);
  if (m == 0) return out;
  const BitVec c = diagonals(seed, n, m);
  const std::size_t nw = input.words().size();

  // shifted[r] holds c starting at bit offset r, so any window start p reads
  // aligned words from shifted[p % 64] at p / 64.
  const std::size_t span = (c.size() + 63) / 64 + 1;
  std::vector<std::uint64_t> shifted(64 * span);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t w = 0; w < span; ++w) shifted[r * span + w] = c.window(r + 64 * w);

  const auto& x = input.words();
  std::vector<std::uint8_t> bits(m);
  const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const std::size_t p = m - 1 - static_cast<std::size_t>(i);
    const std::uint64_t* row = &shifted[(p & 63) * span + (p >> 6)];
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < nw; ++w) acc ^= x[w] & row[w];
    bits[i] = std::popcount(acc) & 1;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (bits[i]) out.set(i, true);
  return out;
}

}  // namespace

PASpec make_pa_spec(std::size_t n, double pa_factor, std::uint64_t seed) {
  if (!(pa_factor >= 0.0 && pa_factor <= 1.0)) throw std::invalid_argument("pa_factor must lie in [0, 1]");
  PASpec s;
  s.pa_factor = pa_factor;
  s.input_len = n;
  s.output_len = static_cast<std::size_t>(std::floor(pa_factor * static_cast<double>(n)));
  s.output_len = std::min(s.output_len, n);
  s.seed = BitVec(seed_len(n, s.output_len));
  Rng rng(seed);
  auto& w = s.seed.words();
  for (auto& word : w) word = rng();
  s.seed.resize(s.seed.size());
  return s;
}

double compute_pa_factor(double corrected_rate, double estimated_final_rate) {
  if (!(corrected_rate > 0.0)) throw std::invalid_argument("corrected rate must be > 0");
  return std::clamp(estimated_final_rate / corrected_rate, 0.0, 1.0);
}

BitVec toeplitz_naive(const BitVec& input, const BitVec& seed, std::size_t m) {
  check(input, seed, m);
  const std::size_t n = input.size();
  BitVec out(m);
  for (std::size_t i = 0; i < m; ++i) {
    bool acc = false;
    for (std::size_t j = 0; j < n; ++j) {
      const bool t = j >= i ? seed.get(j - i) : seed.get(n + i - j - 1);
      acc ^= t && input.get(j);
    }
    out.set(i, acc);
  }
  return out;
}

BitVec toeplitz_hash(const BitVec& input, const BitVec& seed, std::size_t m) {
  return hash_impl<true>(input, seed, m);
}

BitVec toeplitz_hash_serial(const BitVec& input, const BitVec& seed, std::size_t m) {
  return hash_impl<false>(input, seed, m);
}

BitVec toeplitz_pa(const BitVec& input, const PASpec& spec) {
  if (input.size() != spec.input_len) throw std::invalid_argument("PA input length differs from spec");
  return toeplitz_hash(input, spec.seed, spec.output_len);
}

}  // namespace coex
