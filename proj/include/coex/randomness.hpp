#pragma once

#include "coex/bitvec.hpp"

namespace coex {

struct RandomnessResult {
  double statistic = 0.0;
  double p_value = 0.0;
  bool pass = false;
};

/// Frequency (monobit) test: p = erfc(|S_n| / sqrt(2n)).
RandomnessResult monobit_test(const BitVec& bits, double alpha = 0.01);

/// Runs test with the frequency prerequisite |pi - 1/2| < 2 / sqrt(n).
RandomnessResult runs_test(const BitVec& bits, double alpha = 0.01);

}  // namespace coex
