#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coex/channel_model.hpp"
#include "coex/decoy_params.hpp"
#include "coex/detector_model.hpp"
#include "coex/scenario.hpp"

namespace coex {

struct Qsnr {
  double db = 0.0;
  /// Set when the noise denominator is zero; db is then +infinity.
  bool unbounded = false;
};

/// 10 log10( N_actual (1 - P_after - e_d) / (sum of noise terms) ).
Qsnr qsnr(double n_actual, const NoiseBudget& noise, const DetectorSpec& det,
          const DecoyParams& protocol);

/// QBER = (e_d S + N / 2) / (S + N) with S/N = 10^(qsnr/10).
double qber_from_qsnr(double qsnr_db, const DecoyParams& protocol);

/// Per intensity class counts of one parameter-estimation block. Doubles so
/// that analytic expectations and simulated integers share one path.
struct ClassTally {
  double sent = 0.0;      ///< pulses emitted in this class
  double detected = 0.0;  ///< single-click detections (any basis)
  double sifted = 0.0;    ///< basis-matched detections
  double errors = 0.0;    ///< sifted bits that disagree
};
using Tallies = std::array<ClassTally, 3>;

/// Gains Q and error rates E per class (signal, decoy, vacuum).
struct ChannelStats {
  std::array<double, 3> gain{};
  std::array<double, 3> error{};
};

ChannelStats measured_stats(const Tallies& t);

/// Measured values with their +/- n_sigma binomial envelopes.
struct FiniteSizeStats {
  ChannelStats measured;
  ChannelStats lower;
  ChannelStats upper;
};

class InsufficientStatistics : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws InsufficientStatistics when the block holds fewer sifted bits than
/// protocol.block_size.
FiniteSizeStats finite_size_adjust(const Tallies& t, const DecoyParams& protocol);

struct DecoyBounds {
  double y1_lower = 0.0;
  double e1_upper = 1.0;
  /// False when no positive single-photon yield can be certified.
  bool certified = false;
};

/// Weak + vacuum decoy bounds on point estimates (Y0 = vacuum gain).
DecoyBounds decoy_bounds(const ChannelStats& stats, const DecoyParams& protocol);

/// Same bounds with each term pushed to its adversarial edge of the envelope.
DecoyBounds decoy_bounds(const FiniteSizeStats& stats, const DecoyParams& protocol);

struct KeyRateInputs {
  double gain_mu = 0.0;
  double error_mu = 0.0;
  DecoyBounds bounds;
  /// N_actual / N_mu.
  double dead_time_factor = 1.0;
};

/// Secure key rate in bps, clamped at zero.
double secure_key_rate(const KeyRateInputs& in, const DecoyParams& protocol);

/// Per-pulse key fraction before any rate scaling; may be negative.
double key_fraction(const KeyRateInputs& in, const DecoyParams& protocol);

struct KeyRateReport {
  double link_loss_db = 0.0;
  double n_mu = 0.0;
  double n_actual = 0.0;
  NoiseBudget noise;
  Qsnr qsnr;
  double qber = 0.0;
  double gain_mu = 0.0;
  double error_mu = 0.0;
  double y1_lower = 0.0;
  double e1_upper = 1.0;
  double rate_bps = 0.0;
  bool feasible = false;
};

/// Raman counts reaching the key windows for the scenario (coupling and
/// efficiency scaling applied). Zero-length fibers produce none.
double receiver_srs_rate(const CoexistenceScenario& s);

/// K used by the physical model: explicit value or calibration against beta.
double raman_coeff_for(const CoexistenceScenario& s);

NoiseBudget noise_budget(const CoexistenceScenario& s, double n_actual);

/// Expected per-class gains/errors of the Poissonian channel with background
/// yield y0 (per pulse) and total transmittance eta_t.
ChannelStats expected_stats(double eta_t, double y0, const DecoyParams& protocol);

/// Expected tallies for one block of protocol.block_size sifted bits.
Tallies expected_tallies(const ChannelStats& stats, const DecoyParams& protocol);

/// Full single-point evaluation.
KeyRateReport evaluate(const CoexistenceScenario& s);

/// Sweeps. Points are independent; the parallel forms use OpenMP and return
/// results ordered by input index, identical to the serial forms.
std::vector<KeyRateReport> sweep_power(const CoexistenceScenario& s,
                                       std::span<const double> powers_dbm);
std::vector<KeyRateReport> sweep_power_serial(const CoexistenceScenario& s,
                                              std::span<const double> powers_dbm);
std::vector<KeyRateReport> sweep_distance(const CoexistenceScenario& s,
                                          std::span<const double> lengths_km, SrsModel model);
std::vector<KeyRateReport> sweep_distance_serial(const CoexistenceScenario& s,
                                                 std::span<const double> lengths_km,
                                                 SrsModel model);

/// Fiber at a new length with measured totals dropped (coefficient * length).
CoexistenceScenario at_length(const CoexistenceScenario& s, double length_km);

/// Largest length in [lo, hi] with a positive key rate, by bisection.
double zero_rate_crossing(const CoexistenceScenario& s, SrsModel model, double lo_km,
                          double hi_km);

/// CSV header and row: inputs echoed, then qsnr_db,qber,y1_lower,e1_upper,rate_bps,feasible.
std::string report_csv_header();
std::string report_csv_row(const CoexistenceScenario& s, const KeyRateReport& r);

}  // namespace coex
