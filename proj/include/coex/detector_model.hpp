#pragma once

#include <optional>
#include <string>

#include "coex/common.hpp"

namespace coex {

struct DetectorSpec {
  std::string name;
  double efficiency = 0.11;
  /// Dark click probability per gate and per detector.
  std::optional<double> dark_per_gate;
  /// Dark count rate per detector (free-running detectors).
  std::optional<double> dark_cps;
  double gate_rate_hz = 1.25e9;
  double gate_width_ps = 180.0;
  double dead_time_s = 1e-6;
  double afterpulse_prob = 0.005;
  int num_detectors = 4;

  bool operator==(const DetectorSpec&) const = default;
};

/// Throws InputError naming the violated constraint.
void validate(const DetectorSpec& det);

/// Gated InGaAs/InP SPDs of the field system.
DetectorSpec ingaas_2017();
/// Superconducting nanowire detectors used for the long-distance projection.
DetectorSpec snspd_lab();
/// Resolves "ingaas-2017" / "snspd-lab"; InputError otherwise.
DetectorSpec detector_preset(const std::string& name);

struct DecoyParams;

/// Signal click rate N_mu without dead time: rep * sum_i P_i (1 - e^{-mu_i T eta}).
double expected_signal_rate(double link_loss_db, const DecoyParams& protocol,
                            const DetectorSpec& det);

/// N_mu / (1 + N_mu * t_dead / num_detectors).
double apply_dead_time(double n_mu, const DetectorSpec& det);

double afterpulse_rate(double n_actual, const DetectorSpec& det);

/// Pooled dark count rate over all detectors.
double dark_rate(const DetectorSpec& det);

}  // namespace coex
