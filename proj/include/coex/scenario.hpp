#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coex/channel_model.hpp"
#include "coex/decoy_params.hpp"
#include "coex/detector_model.hpp"

namespace coex {

/// How Raman counts are turned into receiver noise.
struct SrsSettings {
  SrsModel model = SrsModel::Paper;
  /// Fraction of raw Raman counts registered inside the signal detection
  /// windows used for key generation.
  double coupling = 0.125;
  /// Detection efficiency of the detectors the Raman coefficients were
  /// characterised with; counts scale with efficiency / reference.
  double reference_efficiency = 0.11;
  /// Physical-model K in cps/(mW km). Calibrated against beta when absent.
  std::optional<double> raman_coeff;
  CalibrationDirection calibration = CalibrationDirection::Both;
  double calibration_length_km = 66.0;
  bool include_crosstalk = true;

  bool operator==(const SrsSettings&) const = default;
};

struct CoexistenceScenario {
  std::string name;
  FiberSpec fiber;
  ClassicalTrafficSpec traffic;
  FilterSpec filter;
  MuxSpec mux;
  DetectorSpec detector;
  DecoyParams protocol;
  SrsSettings srs;
  std::uint64_t seed = 20170815;

  bool operator==(const CoexistenceScenario&) const = default;
};

void validate(const CoexistenceScenario& s);

/// Field fibers: G652-1/2, G654-110-1/2, G654-130-1/2.
FiberSpec fiber_preset(const std::string& name);
const std::vector<std::string>& fiber_preset_names();

/// Synthetic 66 km fibers used for the filter/loss/Aeff matrix.
/// loss_class is "standard" or "low-loss"; aeff one of 80, 110, 130.
FiberSpec synthetic_fiber(const std::string& loss_class, int aeff_um2, double length_km = 66.0);

/// Beta for an effective core area preset (80 -> 18, 110 -> 10, 130 -> 8).
double beta_for_aeff(int aeff_um2);

/// The 20 GHz / 100 GHz receiver filters.
FilterSpec filter_20ghz();
FilterSpec filter_100ghz();

/// Field baseline: given fiber preset, direction, power, InGaAs detectors.
CoexistenceScenario make_scenario(const std::string& fiber_name, Direction dir,
                                  double launch_power_dbm);

/// Bundled scenario texts by name (e.g. "g654-110-co-21dBm").
const std::vector<std::string>& bundled_scenario_names();
std::optional<std::string> bundled_scenario_text(const std::string& name);

/// Flat key/value format: `section.key = value`, '#' starts a comment.
/// Throws InputError naming the offending line/field.
CoexistenceScenario parse_scenario(const std::string& text);
std::string serialize_scenario(const CoexistenceScenario& s);

/// Reads a file path, or a bundled scenario name when no such file exists.
CoexistenceScenario load_scenario(const std::string& path_or_name);

/// Stable 64-bit FNV-1a of the serialized scenario.
std::uint64_t scenario_hash(const CoexistenceScenario& s);

}  // namespace coex
