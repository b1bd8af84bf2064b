#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coex/common.hpp"

namespace coex {

/// Optical constants of one fiber link. Measured totals, when present,
/// replace coefficient * length (they carry splice and connector excess).
struct FiberSpec {
  std::string name;
  double att_1310_db_per_km = 0.0;
  double att_1550_db_per_km = 0.0;
  double length_km = 0.0;
  std::optional<double> measured_total_loss_1310_db;
  std::optional<double> measured_total_loss_1550_db;
  double aeff_um2 = 0.0;
  /// Raman coefficient in cps/(dBm km), referenced to a 20 GHz pass-band.
  double beta_srs = 0.0;

  bool operator==(const FiberSpec&) const = default;
};

struct ClassicalTrafficSpec {
  bool enabled = true;
  double launch_power_dbm = 21.0;
  Direction direction = Direction::Co;
  double band_low_nm = 1528.0;
  double band_high_nm = 1538.0;
  std::string aggregate_rate = "3.6 Tbps";

  bool operator==(const ClassicalTrafficSpec&) const = default;
};

struct FilterSpec {
  double passband_ghz = 20.0;
  double insertion_loss_db = 1.9;
  double center_wavelength_nm = 1310.0;

  bool operator==(const FilterSpec&) const = default;
};

/// WDM multiplexer (Alice) and de-multiplexer (Bob). demul_loss_1310_db
/// already contains builtin_filter_loss_db for the receiver filter it ships
/// with; link_loss swaps that share for the scenario's filter.
struct MuxSpec {
  double mul_loss_1310_db = 0.30;
  double mul_loss_1550_db = 0.86;
  double demul_loss_1310_db = 2.50;
  double demul_loss_1550_db = 0.87;
  double builtin_filter_loss_db = 1.9;
  double isolation_mul_db = 50.0;
  double isolation_demul_db = 120.0;
  double crosstalk_floor_cps = 60.0;

  bool operator==(const MuxSpec&) const = default;
};

/// Per-source noise count rates at the receiver, all in cps.
struct NoiseBudget {
  double n_srs = 0.0;
  double n_dark = 0.0;
  double n_after = 0.0;
  double n_crosstalk = 0.0;
  /// Four-wave mixing and Brillouin scattering; always zero.
  double n_fwm_brillouin = 0.0;

  double total() const { return n_srs + n_dark + n_after + n_crosstalk + n_fwm_brillouin; }
};

enum class Wavelength { Nm1310, Nm1550 };

Wavelength wavelength_from_nm(double nm);

/// Fiber-only loss at a wavelength (measured override if present).
double fiber_loss(const FiberSpec& fiber, Wavelength wl);

/// End-to-end loss seen by the quantum channel: fiber + MUL + De-MUL, with the
/// De-MUL's builtin filter loss replaced by filter.insertion_loss_db at 1310 nm.
double link_loss(const FiberSpec& fiber, const MuxSpec& mux, const FilterSpec& filter,
                 double wavelength_nm);

/// Raman counts under the dBm-linear model: beta * P[dBm] * L * (B / 20 GHz).
/// Direction-symmetric.
double srs_rate_paper(const FiberSpec& fiber, const ClassicalTrafficSpec& traffic,
                      const FilterSpec& filter);

/// Length factor (km) of the physical model: the integral of pump decay times
/// scattered-photon decay along the fiber. Co-propagating photons travel
/// with the pump; counter-propagating ones travel back towards the launch end.
double srs_length_factor(const FiberSpec& fiber, Direction direction);

/// Raman counts under the mW-linear physical model:
/// K * P[mW] * length_factor * (B / 20 GHz), K in cps/(mW km).
double srs_rate_physical(const FiberSpec& fiber, const ClassicalTrafficSpec& traffic,
                         const FilterSpec& filter, double raman_coeff);

double crosstalk_rate(const MuxSpec& mux);

/// Which propagation directions the calibration averages over.
enum class CalibrationDirection { Co, Counter, Both };

CalibrationDirection parse_calibration_direction(const std::string& s);
std::string to_string(CalibrationDirection d);

struct Calibration {
  double raman_coeff = 0.0;   ///< K, cps/(mW km)
  double residual = 0.0;      ///< |fitted average - beta| in cps/(dBm km)
  int iterations = 0;
};

/// Fits K so that the physical model, normalised by P[dBm] * L and averaged
/// over the given launch powers (and directions), reproduces fiber.beta_srs.
Calibration calibrate_raman_coeff(const FiberSpec& fiber, CalibrationDirection direction,
                                  const std::vector<double>& powers_dbm);

/// Integer launch powers 8..21 dBm.
std::vector<double> default_calibration_powers();

}  // namespace coex
