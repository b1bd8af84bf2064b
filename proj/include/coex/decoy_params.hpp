#pragma once

#include <array>
#include <cstdint>

namespace coex {

enum class IntensityClass : std::uint8_t { Signal = 0, Decoy = 1, Vacuum = 2 };

/// Decoy-state BB84 source and post-processing parameters.
struct DecoyParams {
  double mu = 0.6;
  double nu = 0.2;
  double omega = 0.0;
  std::array<double, 3> emission_probs{6.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0};
  double rep_rate_hz = 625e6;
  double e_d = 0.007;
  double f_ec = 1.35;
  double sift_factor = 0.5;
  double block_size = 500000.0;
  double n_sigma = 7.0;
  double qber_cap = 0.04;
  /// Share of wall-clock time spent accumulating key.
  double duty_cycle = 0.38;

  double intensity(int cls) const { return cls == 0 ? mu : cls == 1 ? nu : omega; }

  bool operator==(const DecoyParams&) const = default;
};

/// Error rate of a vacuum (or noise-only) click.
inline constexpr double kVacuumErrorRate = 0.5;

/// Throws InputError on broken invariants (mu > nu > omega = 0, ...).
void validate(const DecoyParams& p);

}  // namespace coex
