#include "coex/channel_model.hpp"

#include <algorithm>
#include <cmath>

namespace coex {

std::string to_string(Direction d) { return d == Direction::Co ? "co" : "counter"; }

std::string to_string(SrsModel m) { return m == SrsModel::Paper ? "paper" : "physical"; }

Direction parse_direction(const std::string& s) {
  if (s == "co") return Direction::Co;
  if (s == "counter") return Direction::Counter;
  throw InputError("direction must be 'co' or 'counter', got '" + s + "'");
}

SrsModel parse_srs_model(const std::string& s) {
  if (s == "paper") return SrsModel::Paper;
  if (s == "physical") return SrsModel::Physical;
  throw InputError("srs model must be 'paper' or 'physical', got '" + s + "'");
}

CalibrationDirection parse_calibration_direction(const std::string& s) {
  if (s == "co") return CalibrationDirection::Co;
  if (s == "counter") return CalibrationDirection::Counter;
  if (s == "both") return CalibrationDirection::Both;
  throw InputError("calibration direction must be co, counter or both, got '" + s + "'");
}

std::string to_string(CalibrationDirection d) {
  switch (d) {
    case CalibrationDirection::Co: return "co";
    case CalibrationDirection::Counter: return "counter";
    case CalibrationDirection::Both: return "both";
  }
  return "both";
}

Wavelength wavelength_from_nm(double nm) {
  if (nm == 1310.0) return Wavelength::Nm1310;
  if (nm == 1550.0) return Wavelength::Nm1550;
  throw InputError("unsupported wavelength " + std::to_string(nm) + " nm (use 1310 or 1550)");
}

double fiber_loss(const FiberSpec& fiber, Wavelength wl) {
  if (fiber.length_km < 0.0) throw InputError("fiber.length_km must be >= 0");
  if (wl == Wavelength::Nm1310) {
    if (fiber.measured_total_loss_1310_db) return *fiber.measured_total_loss_1310_db;
    return fiber.att_1310_db_per_km * fiber.length_km;
  }
  if (fiber.measured_total_loss_1550_db) return *fiber.measured_total_loss_1550_db;
  return fiber.att_1550_db_per_km * fiber.length_km;
}

double link_loss(const FiberSpec& fiber, const MuxSpec& mux, const FilterSpec& filter,
                 double wavelength_nm) {
  const Wavelength wl = wavelength_from_nm(wavelength_nm);
  const double f = fiber_loss(fiber, wl);
  if (wl == Wavelength::Nm1310) {
    const double demul =
        mux.demul_loss_1310_db - mux.builtin_filter_loss_db + filter.insertion_loss_db;
    return f + mux.mul_loss_1310_db + demul;
  }
  return f + mux.mul_loss_1550_db + mux.demul_loss_1550_db;
}

namespace {

double passband_scale(const FilterSpec& filter) {
  if (filter.passband_ghz <= 0.0) throw InputError("filter.passband_ghz must be > 0");
  return filter.passband_ghz / 20.0;
}

void check_power(const ClassicalTrafficSpec& traffic) {
  if (traffic.launch_power_dbm < 8.0 || traffic.launch_power_dbm > 21.0)
    throw InputError("traffic.launch_power_dbm must lie in [8, 21]");
}

}  // namespace

double srs_rate_paper(const FiberSpec& fiber, const ClassicalTrafficSpec& traffic,
                      const FilterSpec& filter) {
  if (!traffic.enabled) return 0.0;
  check_power(traffic);
  const double r =
      fiber.beta_srs * traffic.launch_power_dbm * fiber.length_km * passband_scale(filter);
  return std::max(0.0, r);
}

double srs_length_factor(const FiberSpec& fiber, Direction direction) {
  const double L = fiber.length_km;
  if (L <= 0.0) throw InputError("fiber.length_km must be > 0 for the physical Raman model");
  const double a_pump = db_per_km_to_neper(fiber.att_1550_db_per_km);
  const double a_sig = db_per_km_to_neper(fiber.att_1310_db_per_km);
  if (direction == Direction::Counter) {
    const double s = a_pump + a_sig;
    if (s < 1e-15) return L;
    return -std::expm1(-s * L) / s;
  }
  // Photons created at z ride the pump, decay as 1310 nm light for the rest:
  // integral_0^L e^{-a_pump z} e^{-a_sig (L - z)} dz.
  const double d = a_sig - a_pump;
  if (std::abs(d) < 1e-15) return L * std::exp(-a_sig * L);
  return std::exp(-a_sig * L) * std::expm1(d * L) / d;
}

double srs_rate_physical(const FiberSpec& fiber, const ClassicalTrafficSpec& traffic,
                         const FilterSpec& filter, double raman_coeff) {
  if (!traffic.enabled) return 0.0;
  check_power(traffic);
  if (raman_coeff <= 0.0) throw InputError("raman coefficient must be > 0");
  const double r = raman_coeff * dbm_to_mw(traffic.launch_power_dbm) *
                   srs_length_factor(fiber, traffic.direction) * passband_scale(filter);
  return std::max(0.0, r);
}

double crosstalk_rate(const MuxSpec& mux) { return mux.crosstalk_floor_cps; }

std::vector<double> default_calibration_powers() {
  std::vector<double> p;
  for (int d = 8; d <= 21; ++d) p.push_back(d);
  return p;
}

Calibration calibrate_raman_coeff(const FiberSpec& fiber, CalibrationDirection direction,
                                  const std::vector<double>& powers_dbm) {
  if (powers_dbm.empty()) throw InputError("calibration needs at least one launch power");
  if (fiber.beta_srs <= 0.0) throw InputError("fiber.beta_srs must be > 0 to calibrate");

  std::vector<Direction> dirs;
  if (direction != CalibrationDirection::Counter) dirs.push_back(Direction::Co);
  if (direction != CalibrationDirection::Co) dirs.push_back(Direction::Counter);

  const FilterSpec ref_filter{};
  auto normalised_average = [&](double k) {
    double sum = 0.0;
    for (double p : powers_dbm) {
      for (Direction d : dirs) {
        ClassicalTrafficSpec t;
        t.launch_power_dbm = p;
        t.direction = d;
        sum += srs_rate_physical(fiber, t, ref_filter, k) / (p * fiber.length_km);
      }
    }
    return sum / static_cast<double>(powers_dbm.size() * dirs.size());
  };

  // Secant iteration on f(K) = avg(K) - beta; exact after one step since avg
  // is linear in K, further steps only polish rounding.
  Calibration cal;
  double k0 = 1.0, k1 = 2.0;
  double f0 = normalised_average(k0) - fiber.beta_srs;
  double f1 = normalised_average(k1) - fiber.beta_srs;
  for (cal.iterations = 1; cal.iterations <= 20; ++cal.iterations) {
    if (f1 == f0) break;
    const double k2 = k1 - f1 * (k1 - k0) / (f1 - f0);
    k0 = k1;
    f0 = f1;
    k1 = k2;
    f1 = normalised_average(k1) - fiber.beta_srs;
    if (std::abs(f1) <= 1e-12 * fiber.beta_srs) break;
  }
  cal.raman_coeff = k1;
  cal.residual = std::abs(f1);
  return cal;
}

}  // namespace coex
