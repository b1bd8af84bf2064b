#include "coex/detector_model.hpp"

#include <cmath>

#include "coex/decoy_params.hpp"

namespace coex {

void validate(const DetectorSpec& det) {
  if (!(det.efficiency > 0.0 && det.efficiency <= 1.0))
    throw InputError("detector.efficiency must lie in (0, 1]");
  if (!(det.afterpulse_prob >= 0.0 && det.afterpulse_prob < 1.0))
    throw InputError("detector.afterpulse_prob must lie in [0, 1)");
  if (det.dead_time_s < 0.0) throw InputError("detector.dead_time_s must be >= 0");
  if (det.num_detectors < 1) throw InputError("detector.num_detectors must be >= 1");
  if (!det.dark_per_gate && !det.dark_cps)
    throw InputError("detector needs dark_per_gate or dark_cps");
  if (det.dark_per_gate && (*det.dark_per_gate < 0.0 || *det.dark_per_gate >= 1.0))
    throw InputError("detector.dark_per_gate must lie in [0, 1)");
  if (det.dark_cps && *det.dark_cps < 0.0) throw InputError("detector.dark_cps must be >= 0");
  if (det.gate_rate_hz <= 0.0) throw InputError("detector.gate_rate_hz must be > 0");
}

DetectorSpec ingaas_2017() {
  DetectorSpec d;
  d.name = "ingaas-2017";
  d.efficiency = 0.11;
  d.dark_per_gate = 3e-7;
  d.gate_rate_hz = 1.25e9;
  d.gate_width_ps = 180.0;
  d.dead_time_s = 1e-6;
  d.afterpulse_prob = 0.005;
  d.num_detectors = 4;
  return d;
}

DetectorSpec snspd_lab() {
  DetectorSpec d;
  d.name = "snspd-lab";
  d.efficiency = 0.45;
  d.dark_cps = 30.0;  // per detector
  d.gate_rate_hz = 625e6;  // free-running; timing windows at the pulse clock
  d.gate_width_ps = 100.0;
  d.dead_time_s = 100e-9;
  d.afterpulse_prob = 0.0;
  d.num_detectors = 4;
  return d;
}

DetectorSpec detector_preset(const std::string& name) {
  if (name == "ingaas-2017") return ingaas_2017();
  if (name == "snspd-lab") return snspd_lab();
  throw InputError("unknown detector preset '" + name + "'");
}

double expected_signal_rate(double link_loss_db, const DecoyParams& protocol,
                            const DetectorSpec& det) {
  if (link_loss_db < 0.0) throw InputError("link loss must be >= 0 dB");
  const double t = std::pow(10.0, -link_loss_db / 10.0) * det.efficiency;
  double per_pulse = 0.0;
  for (int i = 0; i < 3; ++i)
    per_pulse += protocol.emission_probs[i] * -std::expm1(-protocol.intensity(i) * t);
  return protocol.rep_rate_hz * per_pulse;
}

double apply_dead_time(double n_mu, const DetectorSpec& det) {
  return n_mu / (1.0 + n_mu * det.dead_time_s / det.num_detectors);
}

double afterpulse_rate(double n_actual, const DetectorSpec& det) {
  return n_actual * det.afterpulse_prob;
}

double dark_rate(const DetectorSpec& det) {
  if (det.dark_per_gate) return *det.dark_per_gate * det.gate_rate_hz * det.num_detectors;
  return det.dark_cps.value_or(0.0) * det.num_detectors;
}

}  // namespace coex
