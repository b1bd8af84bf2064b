#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace coex {

/// Raised for any invalid user-supplied parameter (scenario field, CLI value,
/// out-of-range physical quantity). The message names the offending field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { Co, Counter };
enum class SrsModel { Paper, Physical };

std::string to_string(Direction d);
std::string to_string(SrsModel m);
Direction parse_direction(const std::string& s);
SrsModel parse_srs_model(const std::string& s);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// dB/km to natural-log attenuation per km.
inline double db_per_km_to_neper(double db_per_km) {
  return db_per_km * std::log(10.0) / 10.0;
}

/// Binary entropy in bits; 0 at the endpoints.
inline double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace coex
