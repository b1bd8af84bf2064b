#include "coex/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace coex {

namespace {

struct PresetRow {
  const char* name;
  double att_1310, att_1550, total_1310, total_1550;
  int aeff;
};

constexpr PresetRow kPresets[] = {
    {"G652-1", 0.337, 0.197, 22.21, 13.01, 80},
    {"G652-2", 0.338, 0.196, 22.29, 12.94, 80},
    {"G654-110-1", 0.300, 0.184, 19.83, 12.13, 110},
    {"G654-110-2", 0.288, 0.174, 19.03, 11.51, 110},
    {"G654-130-1", 0.347, 0.210, 22.88, 13.84, 130},
    {"G654-130-2", 0.348, 0.208, 22.95, 13.73, 130},
};

constexpr double kFieldLengthKm = 66.0;

}  // namespace

double beta_for_aeff(int aeff_um2) {
  switch (aeff_um2) {
    case 80: return 18.0;
    case 110: return 10.0;
    case 130: return 8.0;
    default: throw InputError("no beta preset for aeff " + std::to_string(aeff_um2) + " um^2");
  }
}

FiberSpec fiber_preset(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name != p.name) continue;
    FiberSpec f;
    f.name = p.name;
    f.att_1310_db_per_km = p.att_1310;
    f.att_1550_db_per_km = p.att_1550;
    f.length_km = kFieldLengthKm;
    f.measured_total_loss_1310_db = p.total_1310;
    f.measured_total_loss_1550_db = p.total_1550;
    f.aeff_um2 = p.aeff;
    f.beta_srs = beta_for_aeff(p.aeff);
    return f;
  }
  throw InputError("unknown fiber preset '" + name + "'");
}

const std::vector<std::string>& fiber_preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& p : kPresets) v.emplace_back(p.name);
    return v;
  }();
  return names;
}

FiberSpec synthetic_fiber(const std::string& loss_class, int aeff_um2, double length_km) {
  FiberSpec f;
  if (loss_class == "standard") {
    f.att_1310_db_per_km = 0.337;
    f.att_1550_db_per_km = 0.197;
  } else if (loss_class == "low-loss") {
    f.att_1310_db_per_km = 0.288;
    f.att_1550_db_per_km = 0.174;
  } else {
    throw InputError("fiber loss class must be 'standard' or 'low-loss', got '" + loss_class + "'");
  }
  f.name = loss_class + "-" + std::to_string(aeff_um2);
  f.length_km = length_km;
  f.aeff_um2 = aeff_um2;
  f.beta_srs = beta_for_aeff(aeff_um2);
  return f;
}

FilterSpec filter_20ghz() { return FilterSpec{20.0, 1.9, 1310.0}; }
FilterSpec filter_100ghz() { return FilterSpec{100.0, 0.5, 1310.0}; }

CoexistenceScenario make_scenario(const std::string& fiber_name, Direction dir,
                                  double launch_power_dbm) {
  CoexistenceScenario s;
  s.fiber = fiber_preset(fiber_name);
  s.traffic.launch_power_dbm = launch_power_dbm;
  s.traffic.direction = dir;
  s.filter = filter_20ghz();
  s.detector = ingaas_2017();
  std::string lower;
  for (char c : fiber_name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::ostringstream name;
  name << lower << '-' << to_string(dir) << '-' << launch_power_dbm << "dBm";
  s.name = name.str();
  return s;
}

void validate(const CoexistenceScenario& s) {
  const FiberSpec& f = s.fiber;
  if (!(f.att_1310_db_per_km > 0.0)) throw InputError("fiber.att_1310_db_per_km must be > 0");
  if (!(f.att_1550_db_per_km > 0.0)) throw InputError("fiber.att_1550_db_per_km must be > 0");
  if (!(f.length_km >= 0.0)) throw InputError("fiber.length_km must be >= 0");
  if (!(f.aeff_um2 > 0.0)) throw InputError("fiber.aeff_um2 must be > 0");
  if (!(f.beta_srs >= 0.0)) throw InputError("fiber.beta_srs must be >= 0");
  auto check_total = [&](const std::optional<double>& total, double att, const char* field) {
    if (!total) return;
    if (std::abs(*total - att * f.length_km) > 0.5 + 1e-9)
      throw InputError(std::string(field) + " differs from att * length by more than 0.5 dB");
  };
  check_total(f.measured_total_loss_1310_db, f.att_1310_db_per_km,
              "fiber.measured_total_loss_1310_db");
  check_total(f.measured_total_loss_1550_db, f.att_1550_db_per_km,
              "fiber.measured_total_loss_1550_db");

  if (s.traffic.enabled &&
      (s.traffic.launch_power_dbm < 8.0 || s.traffic.launch_power_dbm > 21.0))
    throw InputError("traffic.launch_power_dbm must lie in [8, 21]");
  if (!(s.filter.passband_ghz > 0.0)) throw InputError("filter.passband_ghz must be > 0");
  if (!(s.filter.insertion_loss_db >= 0.0)) throw InputError("filter.insertion_loss_db must be >= 0");

  const MuxSpec& m = s.mux;
  for (double v : {m.mul_loss_1310_db, m.mul_loss_1550_db, m.demul_loss_1310_db,
                   m.demul_loss_1550_db, m.builtin_filter_loss_db})
    if (!(v >= 0.0)) throw InputError("mux losses must be >= 0");
  if (m.builtin_filter_loss_db > m.demul_loss_1310_db)
    throw InputError("mux.builtin_filter_loss_db must not exceed mux.demul_loss_1310_db");
  if (!(m.crosstalk_floor_cps >= 0.0)) throw InputError("mux.crosstalk_floor_cps must be >= 0");

  validate(s.detector);
  validate(s.protocol);

  if (!(s.srs.coupling > 0.0)) throw InputError("srs.coupling must be > 0");
  if (!(s.srs.reference_efficiency > 0.0)) throw InputError("srs.reference_efficiency must be > 0");
  if (s.srs.raman_coeff && !(*s.srs.raman_coeff > 0.0))
    throw InputError("srs.raman_coeff must be > 0");
  if (!(s.srs.calibration_length_km > 0.0))
    throw InputError("srs.calibration_length_km must be > 0");
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "none"; }
std::string fmt(bool v) { return v ? "true" : "false"; }

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(out))
    throw InputError(key + ": expected a number, got '" + v + "'");
  return out;
}

std::optional<double> parse_optional(const std::string& key, const std::string& v) {
  if (v == "none") return std::nullopt;
  return parse_double(key, v);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw InputError(key + ": expected true or false, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw InputError(key + ": expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw InputError(key + ": expected an unsigned integer, got '" + v + "'");
  return out;
}

using Setter = std::function<void(CoexistenceScenario&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&](const char* key, auto member) {
      t[key] = [member](CoexistenceScenario& s, const std::string& k, const std::string& v) {
        member(s) = parse_double(k, v);
      };
    };
    auto opt = [&](const char* key, auto member) {
      t[key] = [member](CoexistenceScenario& s, const std::string& k, const std::string& v) {
        member(s) = parse_optional(k, v);
      };
    };
    auto flag = [&](const char* key, auto member) {
      t[key] = [member](CoexistenceScenario& s, const std::string& k, const std::string& v) {
        member(s) = parse_bool(k, v);
      };
    };
    auto str = [&](const char* key, auto member) {
      t[key] = [member](CoexistenceScenario& s, const std::string&, const std::string& v) {
        member(s) = v;
      };
    };

    str("name", [](auto& s) -> auto& { return s.name; });
    t["seed"] = [](CoexistenceScenario& s, const std::string& k, const std::string& v) {
      s.seed = parse_u64(k, v);
    };

    t["fiber.preset"] = [](CoexistenceScenario& s, const std::string&, const std::string& v) {
      s.fiber = fiber_preset(v);
    };
    str("fiber.name", [](auto& s) -> auto& { return s.fiber.name; });
    num("fiber.att_1310_db_per_km", [](auto& s) -> auto& { return s.fiber.att_1310_db_per_km; });
    num("fiber.att_1550_db_per_km", [](auto& s) -> auto& { return s.fiber.att_1550_db_per_km; });
    num("fiber.length_km", [](auto& s) -> auto& { return s.fiber.length_km; });
    opt("fiber.measured_total_loss_1310_db",
        [](auto& s) -> auto& { return s.fiber.measured_total_loss_1310_db; });
    opt("fiber.measured_total_loss_1550_db",
        [](auto& s) -> auto& { return s.fiber.measured_total_loss_1550_db; });
    num("fiber.aeff_um2", [](auto& s) -> auto& { return s.fiber.aeff_um2; });
    num("fiber.beta_srs_cps_per_dbm_km", [](auto& s) -> auto& { return s.fiber.beta_srs; });

    flag("traffic.enabled", [](auto& s) -> auto& { return s.traffic.enabled; });
    num("traffic.launch_power_dbm", [](auto& s) -> auto& { return s.traffic.launch_power_dbm; });
    t["traffic.direction"] = [](CoexistenceScenario& s, const std::string&, const std::string& v) {
      s.traffic.direction = parse_direction(v);
    };
    num("traffic.band_low_nm", [](auto& s) -> auto& { return s.traffic.band_low_nm; });
    num("traffic.band_high_nm", [](auto& s) -> auto& { return s.traffic.band_high_nm; });
    str("traffic.aggregate_rate", [](auto& s) -> auto& { return s.traffic.aggregate_rate; });

    num("filter.passband_ghz", [](auto& s) -> auto& { return s.filter.passband_ghz; });
    num("filter.insertion_loss_db", [](auto& s) -> auto& { return s.filter.insertion_loss_db; });
    num("filter.center_wavelength_nm",
        [](auto& s) -> auto& { return s.filter.center_wavelength_nm; });

    num("mux.mul_loss_1310_db", [](auto& s) -> auto& { return s.mux.mul_loss_1310_db; });
    num("mux.mul_loss_1550_db", [](auto& s) -> auto& { return s.mux.mul_loss_1550_db; });
    num("mux.demul_loss_1310_db", [](auto& s) -> auto& { return s.mux.demul_loss_1310_db; });
    num("mux.demul_loss_1550_db", [](auto& s) -> auto& { return s.mux.demul_loss_1550_db; });
    num("mux.builtin_filter_loss_db", [](auto& s) -> auto& { return s.mux.builtin_filter_loss_db; });
    num("mux.isolation_mul_db", [](auto& s) -> auto& { return s.mux.isolation_mul_db; });
    num("mux.isolation_demul_db", [](auto& s) -> auto& { return s.mux.isolation_demul_db; });
    num("mux.crosstalk_floor_cps", [](auto& s) -> auto& { return s.mux.crosstalk_floor_cps; });

    t["detector.preset"] = [](CoexistenceScenario& s, const std::string&, const std::string& v) {
      s.detector = detector_preset(v);
    };
    str("detector.name", [](auto& s) -> auto& { return s.detector.name; });
    num("detector.efficiency", [](auto& s) -> auto& { return s.detector.efficiency; });
    opt("detector.dark_per_gate", [](auto& s) -> auto& { return s.detector.dark_per_gate; });
    opt("detector.dark_cps", [](auto& s) -> auto& { return s.detector.dark_cps; });
    num("detector.gate_rate_hz", [](auto& s) -> auto& { return s.detector.gate_rate_hz; });
    num("detector.gate_width_ps", [](auto& s) -> auto& { return s.detector.gate_width_ps; });
    num("detector.dead_time_s", [](auto& s) -> auto& { return s.detector.dead_time_s; });
    num("detector.afterpulse_prob", [](auto& s) -> auto& { return s.detector.afterpulse_prob; });
    t["detector.num_detectors"] = [](CoexistenceScenario& s, const std::string& k,
                                     const std::string& v) {
      s.detector.num_detectors = parse_int(k, v);
    };

    num("protocol.mu", [](auto& s) -> auto& { return s.protocol.mu; });
    num("protocol.nu", [](auto& s) -> auto& { return s.protocol.nu; });
    num("protocol.omega", [](auto& s) -> auto& { return s.protocol.omega; });
    num("protocol.p_mu", [](auto& s) -> auto& { return s.protocol.emission_probs[0]; });
    num("protocol.p_nu", [](auto& s) -> auto& { return s.protocol.emission_probs[1]; });
    num("protocol.p_omega", [](auto& s) -> auto& { return s.protocol.emission_probs[2]; });
    num("protocol.rep_rate_hz", [](auto& s) -> auto& { return s.protocol.rep_rate_hz; });
    num("protocol.e_d", [](auto& s) -> auto& { return s.protocol.e_d; });
    num("protocol.f_ec", [](auto& s) -> auto& { return s.protocol.f_ec; });
    num("protocol.sift_factor", [](auto& s) -> auto& { return s.protocol.sift_factor; });
    num("protocol.block_size", [](auto& s) -> auto& { return s.protocol.block_size; });
    num("protocol.n_sigma", [](auto& s) -> auto& { return s.protocol.n_sigma; });
    num("protocol.qber_cap", [](auto& s) -> auto& { return s.protocol.qber_cap; });
    num("protocol.duty_cycle", [](auto& s) -> auto& { return s.protocol.duty_cycle; });

    t["srs.model"] = [](CoexistenceScenario& s, const std::string&, const std::string& v) {
      s.srs.model = parse_srs_model(v);
    };
    num("srs.coupling", [](auto& s) -> auto& { return s.srs.coupling; });
    num("srs.reference_efficiency", [](auto& s) -> auto& { return s.srs.reference_efficiency; });
    opt("srs.raman_coeff_cps_per_mw_km", [](auto& s) -> auto& { return s.srs.raman_coeff; });
    t["srs.calibration"] = [](CoexistenceScenario& s, const std::string&, const std::string& v) {
      s.srs.calibration = parse_calibration_direction(v);
    };
    num("srs.calibration_length_km", [](auto& s) -> auto& { return s.srs.calibration_length_km; });
    flag("srs.include_crosstalk", [](auto& s) -> auto& { return s.srs.include_crosstalk; });
    return t;
  }();
  return table;
}

}  // namespace

CoexistenceScenario parse_scenario(const std::string& text) {
  CoexistenceScenario s;
  s.fiber = fiber_preset("G654-110-1");
  s.filter = filter_20ghz();
  s.detector = ingaas_2017();
  s.name = "unnamed";

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw InputError("line " + std::to_string(lineno) + ": unknown field '" + key + "'");
    if (value.empty())
      throw InputError("line " + std::to_string(lineno) + ": " + key + " has no value");
    try {
      it->second(s, key, value);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(s);
  return s;
}

std::string serialize_scenario(const CoexistenceScenario& s) {
  std::ostringstream o;
  auto kv = [&](const char* k, const std::string& v) { o << k << " = " << v << '\n'; };
  kv("name", s.name);
  kv("seed", std::to_string(s.seed));
  o << '\n';
  kv("fiber.name", s.fiber.name);
  kv("fiber.att_1310_db_per_km", fmt(s.fiber.att_1310_db_per_km));
  kv("fiber.att_1550_db_per_km", fmt(s.fiber.att_1550_db_per_km));
  kv("fiber.length_km", fmt(s.fiber.length_km));
  kv("fiber.measured_total_loss_1310_db", fmt(s.fiber.measured_total_loss_1310_db));
  kv("fiber.measured_total_loss_1550_db", fmt(s.fiber.measured_total_loss_1550_db));
  kv("fiber.aeff_um2", fmt(s.fiber.aeff_um2));
  kv("fiber.beta_srs_cps_per_dbm_km", fmt(s.fiber.beta_srs));
  o << '\n';
  kv("traffic.enabled", fmt(s.traffic.enabled));
  kv("traffic.launch_power_dbm", fmt(s.traffic.launch_power_dbm));
  kv("traffic.direction", to_string(s.traffic.direction));
  kv("traffic.band_low_nm", fmt(s.traffic.band_low_nm));
  kv("traffic.band_high_nm", fmt(s.traffic.band_high_nm));
  kv("traffic.aggregate_rate", s.traffic.aggregate_rate);
  o << '\n';
  kv("filter.passband_ghz", fmt(s.filter.passband_ghz));
  kv("filter.insertion_loss_db", fmt(s.filter.insertion_loss_db));
  kv("filter.center_wavelength_nm", fmt(s.filter.center_wavelength_nm));
  o << '\n';
  kv("mux.mul_loss_1310_db", fmt(s.mux.mul_loss_1310_db));
  kv("mux.mul_loss_1550_db", fmt(s.mux.mul_loss_1550_db));
  kv("mux.demul_loss_1310_db", fmt(s.mux.demul_loss_1310_db));
  kv("mux.demul_loss_1550_db", fmt(s.mux.demul_loss_1550_db));
  kv("mux.builtin_filter_loss_db", fmt(s.mux.builtin_filter_loss_db));
  kv("mux.isolation_mul_db", fmt(s.mux.isolation_mul_db));
  kv("mux.isolation_demul_db", fmt(s.mux.isolation_demul_db));
  kv("mux.crosstalk_floor_cps", fmt(s.mux.crosstalk_floor_cps));
  o << '\n';
  kv("detector.name", s.detector.name);
  kv("detector.efficiency", fmt(s.detector.efficiency));
  kv("detector.dark_per_gate", fmt(s.detector.dark_per_gate));
  kv("detector.dark_cps", fmt(s.detector.dark_cps));
  kv("detector.gate_rate_hz", fmt(s.detector.gate_rate_hz));
  kv("detector.gate_width_ps", fmt(s.detector.gate_width_ps));
  kv("detector.dead_time_s", fmt(s.detector.dead_time_s));
  kv("detector.afterpulse_prob", fmt(s.detector.afterpulse_prob));
  kv("detector.num_detectors", std::to_string(s.detector.num_detectors));
  o << '\n';
  kv("protocol.mu", fmt(s.protocol.mu));
  kv("protocol.nu", fmt(s.protocol.nu));
  kv("protocol.omega", fmt(s.protocol.omega));
  kv("protocol.p_mu", fmt(s.protocol.emission_probs[0]));
  kv("protocol.p_nu", fmt(s.protocol.emission_probs[1]));
  kv("protocol.p_omega", fmt(s.protocol.emission_probs[2]));
  kv("protocol.rep_rate_hz", fmt(s.protocol.rep_rate_hz));
  kv("protocol.e_d", fmt(s.protocol.e_d));
  kv("protocol.f_ec", fmt(s.protocol.f_ec));
  kv("protocol.sift_factor", fmt(s.protocol.sift_factor));
  kv("protocol.block_size", fmt(s.protocol.block_size));
  kv("protocol.n_sigma", fmt(s.protocol.n_sigma));
  kv("protocol.qber_cap", fmt(s.protocol.qber_cap));
  kv("protocol.duty_cycle", fmt(s.protocol.duty_cycle));
  o << '\n';
  kv("srs.model", to_string(s.srs.model));
  kv("srs.coupling", fmt(s.srs.coupling));
  kv("srs.reference_efficiency", fmt(s.srs.reference_efficiency));
  kv("srs.raman_coeff_cps_per_mw_km", fmt(s.srs.raman_coeff));
  kv("srs.calibration", to_string(s.srs.calibration));
  kv("srs.calibration_length_km", fmt(s.srs.calibration_length_km));
  kv("srs.include_crosstalk", fmt(s.srs.include_crosstalk));
  return o.str();
}

// ---------------------------------------------------------------------------
// Bundled scenarios

namespace {

struct Bundled {
  const char* name;
  const char* text;
};

const Bundled kBundled[] = {
    {"g652-co-21dBm",
     "name = g652-co-21dBm\nfiber.preset = G652-1\ntraffic.direction = co\n"
     "traffic.launch_power_dbm = 21\n"},
    {"g652-counter-21dBm",
     "name = g652-counter-21dBm\nfiber.preset = G652-2\ntraffic.direction = counter\n"
     "traffic.launch_power_dbm = 21\n"},
    {"g654-110-co-21dBm",
     "name = g654-110-co-21dBm\nfiber.preset = G654-110-1\ntraffic.direction = co\n"
     "traffic.launch_power_dbm = 21\n"},
    {"g654-110-counter-21dBm",
     "name = g654-110-counter-21dBm\nfiber.preset = G654-110-2\n"
     "traffic.direction = counter\ntraffic.launch_power_dbm = 21\n"},
    {"g654-130-co-21dBm",
     "name = g654-130-co-21dBm\nfiber.preset = G654-130-1\ntraffic.direction = co\n"
     "traffic.launch_power_dbm = 21\n"},
    {"g654-130-counter-21dBm",
     "name = g654-130-counter-21dBm\nfiber.preset = G654-130-2\n"
     "traffic.direction = counter\ntraffic.launch_power_dbm = 21\n"},
    {"g654-110-dark",
     "name = g654-110-dark\nfiber.preset = G654-110-1\ntraffic.enabled = false\n"},
    {"snspd-g654-110-co-21dBm",
     "name = snspd-g654-110-co-21dBm\nfiber.preset = G654-110-2\ntraffic.direction = co\n"
     "traffic.launch_power_dbm = 21\ndetector.preset = snspd-lab\nsrs.model = physical\n"},
    {"snspd-g654-110-counter-21dBm",
     "name = snspd-g654-110-counter-21dBm\nfiber.preset = G654-110-2\n"
     "traffic.direction = counter\ntraffic.launch_power_dbm = 21\n"
     "detector.preset = snspd-lab\nsrs.model = physical\n"},
};

}  // namespace

const std::vector<std::string>& bundled_scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& b : kBundled) v.emplace_back(b.name);
    return v;
  }();
  return names;
}

std::optional<std::string> bundled_scenario_text(const std::string& name) {
  for (const auto& b : kBundled)
    if (name == b.name) return std::string(b.text);
  return std::nullopt;
}

CoexistenceScenario load_scenario(const std::string& path_or_name) {
  std::ifstream in(path_or_name);
  if (in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
  }
  if (auto text = bundled_scenario_text(path_or_name)) return parse_scenario(*text);
  throw InputError("scenario '" + path_or_name + "' is neither a readable file nor a bundled name");
}

std::uint64_t scenario_hash(const CoexistenceScenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_scenario(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace coex
