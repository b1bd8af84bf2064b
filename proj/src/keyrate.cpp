#include "coex/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "coex/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coex {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void validate(const DecoyParams& p) {
  if (!(p.mu > p.nu && p.nu > p.omega && p.omega == 0.0))
    throw InputError("protocol intensities must satisfy mu > nu > omega = 0");
  double sum = 0.0;
  for (double q : p.emission_probs) {
    if (q < 0.0) throw InputError("protocol.emission_probs must be >= 0");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InputError("protocol.emission_probs must sum to 1");
  if (p.f_ec < 1.0 || p.f_ec > 2.0) throw InputError("protocol.f_ec must lie in [1, 2]");
  if (!(p.sift_factor > 0.0 && p.sift_factor <= 1.0))
    throw InputError("protocol.sift_factor must lie in (0, 1]");
  if (p.rep_rate_hz <= 0.0) throw InputError("protocol.rep_rate_hz must be > 0");
  if (p.e_d < 0.0 || p.e_d >= 0.5) throw InputError("protocol.e_d must lie in [0, 0.5)");
  if (p.block_size <= 0.0) throw InputError("protocol.block_size must be > 0");
  if (p.n_sigma < 0.0) throw InputError("protocol.n_sigma must be >= 0");
  if (!(p.qber_cap > 0.0 && p.qber_cap <= 0.5))
    throw InputError("protocol.qber_cap must lie in (0, 0.5]");
  if (!(p.duty_cycle > 0.0 && p.duty_cycle <= 1.0))
    throw InputError("protocol.duty_cycle must lie in (0, 1]");
}

Qsnr qsnr(double n_actual, const NoiseBudget& noise, const DetectorSpec& det,
          const DecoyParams& protocol) {
  const double signal = n_actual * (1.0 - det.afterpulse_prob - protocol.e_d);
  const double denom = noise.total();
  if (denom <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {10.0 * std::log10(signal / denom), false};
}

double qber_from_qsnr(double qsnr_db, const DecoyParams& protocol) {
  if (std::isinf(qsnr_db) && qsnr_db > 0) return protocol.e_d;
  const double snr = std::pow(10.0, qsnr_db / 10.0);
  return (protocol.e_d * snr + kVacuumErrorRate) / (snr + 1.0);
}

ChannelStats measured_stats(const Tallies& t) {
  ChannelStats s;
  for (int i = 0; i < 3; ++i) {
    s.gain[i] = t[i].sent > 0 ? t[i].detected / t[i].sent : 0.0;
    s.error[i] = t[i].sifted > 0 ? t[i].errors / t[i].sifted : 0.0;
  }
  return s;
}

FiniteSizeStats finite_size_adjust(const Tallies& t, const DecoyParams& protocol) {
  double sifted = 0.0;
  for (const auto& c : t) sifted += c.sifted;
  if (sifted < protocol.block_size * (1.0 - 1e-12))
    throw InsufficientStatistics("block holds " + std::to_string(sifted) +
                                 " sifted bits, need " + std::to_string(protocol.block_size));

  FiniteSizeStats fs;
  fs.measured = measured_stats(t);
  fs.lower = fs.measured;
  fs.upper = fs.measured;
  const double k = protocol.n_sigma;
  for (int i = 0; i < 3; ++i) {
    const double q = fs.measured.gain[i];
    const double e = fs.measured.error[i];
    const double sq = t[i].sent > 0 ? std::sqrt(q * (1.0 - q) / t[i].sent) : 0.0;
    const double se = t[i].sifted > 0 ? std::sqrt(e * (1.0 - e) / t[i].sifted) : 0.0;
    fs.lower.gain[i] = std::max(0.0, q - k * sq);
    fs.upper.gain[i] = std::min(1.0, q + k * sq);
    fs.lower.error[i] = std::max(0.0, e - k * se);
    fs.upper.error[i] = std::min(1.0, e + k * se);
  }
  return fs;
}

namespace {

double y1_lower_bound(double q_mu, double q_nu, double y0, const DecoyParams& p) {
  const double mu = p.mu, nu = p.nu;
  return mu / (mu * nu - nu * nu) *
         (q_nu * std::exp(nu) - q_mu * std::exp(mu) * (nu * nu) / (mu * mu) -
          (mu * mu - nu * nu) / (mu * mu) * y0);
}

double e1_upper_bound(double e_nu, double q_nu, double y0, double y1, const DecoyParams& p) {
  return (e_nu * q_nu * std::exp(p.nu) - kVacuumErrorRate * y0) / (y1 * p.nu);
}

DecoyBounds finish(double y1, double e1) {
  DecoyBounds b;
  if (!(y1 > 0.0)) return b;
  b.certified = true;
  b.y1_lower = std::min(1.0, y1);
  b.e1_upper = std::clamp(e1, 0.0, 1.0);
  return b;
}

}  // namespace

DecoyBounds decoy_bounds(const ChannelStats& s, const DecoyParams& p) {
  const double y0 = s.gain[2];
  const double y1 = y1_lower_bound(s.gain[0], s.gain[1], y0, p);
  if (!(y1 > 0.0)) return {};
  return finish(y1, e1_upper_bound(s.error[1], s.gain[1], y0, y1, p));
}

DecoyBounds decoy_bounds(const FiniteSizeStats& fs, const DecoyParams& p) {
  // Y1 falls with a smaller decoy gain, a larger signal gain and a larger
  // background; e1 rises with more decoy errors and a smaller background.
  const double y1 = y1_lower_bound(fs.upper.gain[0], fs.lower.gain[1], fs.upper.gain[2], p);
  if (!(y1 > 0.0)) return {};
  return finish(y1, e1_upper_bound(fs.upper.error[1], fs.upper.gain[1], fs.lower.gain[2],
                                   std::min(1.0, y1), p));
}

double key_fraction(const KeyRateInputs& in, const DecoyParams& p) {
  if (!in.bounds.certified) return 0.0;
  const double q1 = in.bounds.y1_lower * p.mu * std::exp(-p.mu);
  const double per_pulse = -in.gain_mu * p.f_ec * binary_entropy(in.error_mu) +
                           q1 * (1.0 - binary_entropy(in.bounds.e1_upper));
  return p.sift_factor * p.emission_probs[0] * per_pulse;
}

double secure_key_rate(const KeyRateInputs& in, const DecoyParams& p) {
  const double r = p.rep_rate_hz * in.dead_time_factor * p.duty_cycle * key_fraction(in, p);
  return std::max(0.0, r);
}

double raman_coeff_for(const CoexistenceScenario& s) {
  if (s.srs.raman_coeff) return *s.srs.raman_coeff;
  FiberSpec ref = s.fiber;
  ref.length_km = s.srs.calibration_length_km;
  return calibrate_raman_coeff(ref, s.srs.calibration, default_calibration_powers()).raman_coeff;
}

double receiver_srs_rate(const CoexistenceScenario& s) {
  if (!s.traffic.enabled || s.fiber.length_km == 0.0) return 0.0;
  const double raw = s.srs.model == SrsModel::Paper
                         ? srs_rate_paper(s.fiber, s.traffic, s.filter)
                         : srs_rate_physical(s.fiber, s.traffic, s.filter, raman_coeff_for(s));
  return raw * s.srs.coupling * s.detector.efficiency / s.srs.reference_efficiency;
}

NoiseBudget noise_budget(const CoexistenceScenario& s, double n_actual) {
  NoiseBudget n;
  n.n_srs = receiver_srs_rate(s);
  n.n_dark = dark_rate(s.detector);
  n.n_after = afterpulse_rate(n_actual, s.detector);
  n.n_crosstalk = s.srs.include_crosstalk ? crosstalk_rate(s.mux) : 0.0;
  return n;
}

ChannelStats expected_stats(double eta_t, double y0, const DecoyParams& p) {
  ChannelStats s;
  for (int i = 0; i < 3; ++i) {
    const double signal = -std::expm1(-p.intensity(i) * eta_t);
    const double q = 1.0 - (1.0 - y0) * (1.0 - signal);
    s.gain[i] = q;
    s.error[i] = q > 0 ? (kVacuumErrorRate * y0 + p.e_d * signal) / q : 0.0;
  }
  return s;
}

Tallies expected_tallies(const ChannelStats& s, const DecoyParams& p) {
  double q_avg = 0.0;
  for (int i = 0; i < 3; ++i) q_avg += p.emission_probs[i] * s.gain[i];
  Tallies t{};
  if (q_avg <= 0.0) return t;
  const double pulses = p.block_size / (p.sift_factor * q_avg);
  for (int i = 0; i < 3; ++i) {
    t[i].sent = p.emission_probs[i] * pulses;
    t[i].detected = s.gain[i] * t[i].sent;
    t[i].sifted = p.sift_factor * t[i].detected;
    t[i].errors = s.error[i] * t[i].sifted;
  }
  return t;
}

KeyRateReport evaluate(const CoexistenceScenario& s) {
  KeyRateReport r;
  r.link_loss_db = link_loss(s.fiber, s.mux, s.filter, 1310.0);
  r.n_mu = expected_signal_rate(r.link_loss_db, s.protocol, s.detector);
  r.n_actual = apply_dead_time(r.n_mu, s.detector);
  r.noise = noise_budget(s, r.n_actual);
  r.qsnr = qsnr(r.n_actual, r.noise, s.detector, s.protocol);
  r.qber = r.qsnr.unbounded ? s.protocol.e_d : qber_from_qsnr(r.qsnr.db, s.protocol);

  const double eta_t = std::pow(10.0, -r.link_loss_db / 10.0) * s.detector.efficiency;
  const double y0 = r.noise.total() / s.protocol.rep_rate_hz;
  const ChannelStats stats = expected_stats(eta_t, y0, s.protocol);
  r.gain_mu = stats.gain[0];
  r.error_mu = stats.error[0];

  DecoyBounds bounds;
  try {
    bounds = decoy_bounds(finite_size_adjust(expected_tallies(stats, s.protocol), s.protocol),
                          s.protocol);
  } catch (const InsufficientStatistics&) {
    bounds = {};
  }
  r.y1_lower = bounds.y1_lower;
  r.e1_upper = bounds.e1_upper;

  KeyRateInputs in{stats.gain[0], stats.error[0], bounds,
                   r.n_mu > 0 ? r.n_actual / r.n_mu : 1.0};
  r.rate_bps = secure_key_rate(in, s.protocol);
  r.feasible = r.rate_bps > 0.0 && r.qber <= s.protocol.qber_cap;
  return r;
}

CoexistenceScenario at_length(const CoexistenceScenario& s, double length_km) {
  CoexistenceScenario out = s;
  out.fiber.length_km = length_km;
  out.fiber.measured_total_loss_1310_db.reset();
  out.fiber.measured_total_loss_1550_db.reset();
  return out;
}

namespace {

CoexistenceScenario with_power(const CoexistenceScenario& s, double p) {
  CoexistenceScenario out = s;
  out.traffic.launch_power_dbm = p;
  return out;
}

CoexistenceScenario for_distance(const CoexistenceScenario& s, double L, SrsModel model) {
  CoexistenceScenario out = at_length(s, L);
  out.srs.model = model;
  // K is a property of the fiber, fixed by the calibration length.
  if (model == SrsModel::Physical && !out.srs.raman_coeff) out.srs.raman_coeff = raman_coeff_for(s);
  return out;
}

}  // namespace

std::vector<KeyRateReport> sweep_power_serial(const CoexistenceScenario& s,
                                              std::span<const double> powers) {
  std::vector<KeyRateReport> out;
  out.reserve(powers.size());
  for (double p : powers) out.push_back(evaluate(with_power(s, p)));
  return out;
}

std::vector<KeyRateReport> sweep_power(const CoexistenceScenario& s,
                                       std::span<const double> powers) {
  std::vector<KeyRateReport> out(powers.size());
  parallel_for(static_cast<std::ptrdiff_t>(powers.size()),
               [&](std::ptrdiff_t i) { out[i] = evaluate(with_power(s, powers[i])); });
  return out;
}

std::vector<KeyRateReport> sweep_distance_serial(const CoexistenceScenario& s,
                                                 std::span<const double> lengths,
                                                 SrsModel model) {
  std::vector<KeyRateReport> out;
  out.reserve(lengths.size());
  CoexistenceScenario base = s;
  if (model == SrsModel::Physical && !base.srs.raman_coeff) base.srs.raman_coeff = raman_coeff_for(s);
  for (double L : lengths) out.push_back(evaluate(for_distance(base, L, model)));
  return out;
}

std::vector<KeyRateReport> sweep_distance(const CoexistenceScenario& s,
                                          std::span<const double> lengths, SrsModel model) {
  std::vector<KeyRateReport> out(lengths.size());
  CoexistenceScenario base = s;
  if (model == SrsModel::Physical && !base.srs.raman_coeff) base.srs.raman_coeff = raman_coeff_for(s);
  parallel_for(static_cast<std::ptrdiff_t>(lengths.size()), [&](std::ptrdiff_t i) {
    out[i] = evaluate(for_distance(base, lengths[i], model));
  });
  return out;
}

double zero_rate_crossing(const CoexistenceScenario& s, SrsModel model, double lo, double hi) {
  CoexistenceScenario base = s;
  if (model == SrsModel::Physical && !base.srs.raman_coeff) base.srs.raman_coeff = raman_coeff_for(s);
  auto positive = [&](double L) { return evaluate(for_distance(base, L, model)).rate_bps > 0.0; };
  if (!positive(lo)) return lo;
  if (positive(hi)) return hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (positive(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::string report_csv_header() {
  return "scenario,fiber,length_km,launch_power_dbm,direction,passband_ghz,detector,srs_model,"
         "qsnr_db,qber,y1_lower,e1_upper,rate_bps,feasible";
}

std::string report_csv_row(const CoexistenceScenario& s, const KeyRateReport& r) {
  char power[32];
  if (s.traffic.enabled)
    std::snprintf(power, sizeof power, "%.3f", s.traffic.launch_power_dbm);
  else
    std::snprintf(power, sizeof power, "off");
  char qs[32];
  if (r.qsnr.unbounded)
    std::snprintf(qs, sizeof qs, "inf");
  else
    std::snprintf(qs, sizeof qs, "%.4f", r.qsnr.db);
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%.3f,%s,%s,%.1f,%s,%s,%s,%.6f,%.6e,%.6f,%.3f,%d",
                s.name.c_str(), s.fiber.name.c_str(), s.fiber.length_km, power,
                to_string(s.traffic.direction).c_str(), s.filter.passband_ghz,
                s.detector.name.c_str(), to_string(s.srs.model).c_str(), qs, r.qber, r.y1_lower,
                r.e1_upper, r.rate_bps, r.feasible ? 1 : 0);
  return buf;
}

}  // namespace coex
