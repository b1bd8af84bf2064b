#include "coex/randomness.hpp"

#include <cmath>

namespace coex {

RandomnessResult monobit_test(const BitVec& bits, double alpha) {
  RandomnessResult r;
  const double n = static_cast<double>(bits.size());
  if (n == 0) return r;
  const double s = 2.0 * static_cast<double>(bits.popcount()) - n;
  r.statistic = std::abs(s) / std::sqrt(n);
  r.p_value = std::erfc(r.statistic / std::sqrt(2.0));
  r.pass = r.p_value >= alpha;
  return r;
}

RandomnessResult runs_test(const BitVec& bits, double alpha) {
  RandomnessResult r;
  const std::size_t len = bits.size();
  if (len < 2) return r;
  const double n = static_cast<double>(len);
  const double pi = static_cast<double>(bits.popcount()) / n;
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) return r;
  double runs = 1.0;
  for (std::size_t i = 1; i < len; ++i) runs += bits.get(i) != bits.get(i - 1);
  r.statistic = runs;
  const double q = pi * (1.0 - pi);
  r.p_value = std::erfc(std::abs(runs - 2.0 * n * q) / (2.0 * std::sqrt(2.0 * n) * q));
  r.pass = r.p_value >= alpha;
  return r;
}

}  // namespace coex
