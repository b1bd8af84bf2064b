#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coex/channel_model.hpp"
#include "coex/detector_model.hpp"
#include "coex/keyrate.hpp"
#include "coex/scenario.hpp"

using namespace coex;

namespace {

ClassicalTrafficSpec traffic(double dbm, Direction d) {
  ClassicalTrafficSpec t;
  t.launch_power_dbm = dbm;
  t.direction = d;
  return t;
}

FilterSpec passband(double ghz) {
  FilterSpec f;
  f.passband_ghz = ghz;
  return f;
}

}  // namespace

TEST_CASE("link loss of the field presets") {
  const MuxSpec mux;
  CHECK(link_loss(fiber_preset("G654-110-2"), mux, filter_20ghz(), 1310) ==
        doctest::Approx(19.03 + 0.30 + 2.50).epsilon(1e-12));
  CHECK(link_loss(fiber_preset("G652-1"), mux, filter_20ghz(), 1550) ==
        doctest::Approx(13.01 + 0.86 + 0.87).epsilon(1e-12));
}

TEST_CASE("100 GHz filter replaces the builtin FBG share of the De-MUL loss") {
  const MuxSpec mux;
  const double narrow = link_loss(fiber_preset("G654-110-2"), mux, filter_20ghz(), 1310);
  const double wide = link_loss(fiber_preset("G654-110-2"), mux, filter_100ghz(), 1310);
  CHECK(narrow - wide == doctest::Approx(1.9 - 0.5));
}

TEST_CASE("lossless zero-length link") {
  FiberSpec f = synthetic_fiber("standard", 80, 0.0);
  MuxSpec mux;
  mux.mul_loss_1310_db = mux.demul_loss_1310_db = mux.builtin_filter_loss_db = 0.0;
  FilterSpec filt = filter_20ghz();
  filt.insertion_loss_db = 0.0;
  CHECK(link_loss(f, mux, filt, 1310) == 0.0);
}

TEST_CASE("link loss errors") {
  FiberSpec f = fiber_preset("G652-1");
  CHECK_THROWS_AS(link_loss(f, MuxSpec{}, filter_20ghz(), 1490), InputError);
  f = synthetic_fiber("standard", 80, -1.0);
  CHECK_THROWS_AS(link_loss(f, MuxSpec{}, filter_20ghz(), 1310), InputError);
}

TEST_CASE("fiber loss is additive over segments without measured totals") {
  const double a = fiber_loss(synthetic_fiber("low-loss", 110, 30.0), Wavelength::Nm1310);
  const double b = fiber_loss(synthetic_fiber("low-loss", 110, 36.0), Wavelength::Nm1310);
  const double whole = fiber_loss(synthetic_fiber("low-loss", 110, 66.0), Wavelength::Nm1310);
  CHECK(a + b == doctest::Approx(whole).epsilon(1e-14));
}

TEST_CASE("field fiber presets are self-consistent") {
  for (const auto& name : fiber_preset_names()) {
    CAPTURE(name);
    const FiberSpec f = fiber_preset(name);
    CHECK(f.att_1310_db_per_km > f.att_1550_db_per_km);
    CHECK(f.att_1550_db_per_km > 0.0);
    REQUIRE(f.measured_total_loss_1310_db);
    REQUIRE(f.measured_total_loss_1550_db);
    CHECK(std::abs(*f.measured_total_loss_1310_db - f.att_1310_db_per_km * f.length_km) <= 0.5);
    CHECK(std::abs(*f.measured_total_loss_1550_db - f.att_1550_db_per_km * f.length_km) <= 0.5);
    CHECK(f.beta_srs == beta_for_aeff(static_cast<int>(f.aeff_um2)));
  }
  CHECK_THROWS_AS(fiber_preset("G655"), InputError);
}

TEST_CASE("paper Raman model") {
  const auto co21 = traffic(21, Direction::Co);
  CHECK(srs_rate_paper(fiber_preset("G652-1"), co21, filter_20ghz()) ==
        doctest::Approx(18.0 * 21.0 * 66.0));
  CHECK(srs_rate_paper(fiber_preset("G652-1"), co21, filter_20ghz()) ==
        doctest::Approx(24948.0));

  const double r130 = srs_rate_paper(fiber_preset("G654-130-1"), co21, filter_20ghz());
  const double r652 = srs_rate_paper(fiber_preset("G652-1"), co21, filter_20ghz());
  CHECK(r130 / r652 == doctest::Approx(8.0 / 18.0));
  CHECK(1.0 - r130 / r652 == doctest::Approx(0.556).epsilon(1e-3));

  FiberSpec zero = fiber_preset("G652-1");
  zero.beta_srs = 0.0;
  CHECK(srs_rate_paper(zero, co21, filter_20ghz()) == 0.0);

  CHECK(srs_rate_paper(fiber_preset("G652-1"), traffic(21, Direction::Counter), filter_20ghz()) ==
        r652);
  CHECK_THROWS_AS(srs_rate_paper(fiber_preset("G652-1"), traffic(22, Direction::Co), filter_20ghz()),
                  InputError);
  CHECK_THROWS_AS(srs_rate_paper(fiber_preset("G652-1"), traffic(7.5, Direction::Co), filter_20ghz()),
                  InputError);
}

TEST_CASE("filter scaling is exactly five-fold in both models") {
  const FiberSpec f = fiber_preset("G654-110-1");
  for (Direction d : {Direction::Co, Direction::Counter}) {
    const auto t = traffic(17, d);
    CHECK(srs_rate_paper(f, t, passband(100)) ==
          doctest::Approx(5.0 * srs_rate_paper(f, t, passband(20))).epsilon(1e-14));
    CHECK(srs_rate_physical(f, t, passband(100), 40.0) ==
          doctest::Approx(5.0 * srs_rate_physical(f, t, passband(20), 40.0)).epsilon(1e-14));
  }
}

TEST_CASE("physical Raman model limits") {
  FiberSpec f = synthetic_fiber("standard", 80, 66.0);
  const double k = 30.0;
  const double p_mw = std::pow(10.0, 15.0 / 10.0);

  SUBCASE("lossless fiber reduces to K P L in both directions") {
    f.att_1310_db_per_km = f.att_1550_db_per_km = 0.0;
    for (Direction d : {Direction::Co, Direction::Counter})
      CHECK(srs_rate_physical(f, traffic(15, d), filter_20ghz(), k) ==
            doctest::Approx(k * p_mw * 66.0).epsilon(1e-12));
  }
  SUBCASE("nearly lossless fiber approaches K P L") {
    f.att_1310_db_per_km = 1e-6;
    f.att_1550_db_per_km = 2e-6;
    for (Direction d : {Direction::Co, Direction::Counter})
      CHECK(srs_rate_physical(f, traffic(15, d), filter_20ghz(), k) ==
            doctest::Approx(k * p_mw * 66.0).epsilon(1e-4));
  }
  SUBCASE("short fiber produces almost nothing") {
    f.length_km = 1e-9;
    for (Direction d : {Direction::Co, Direction::Counter})
      CHECK(srs_rate_physical(f, traffic(15, d), filter_20ghz(), k) < 1e-6);
  }
  SUBCASE("length factors against numerical integration") {
    const double ap = 0.197 * std::log(10.0) / 10.0, as = 0.337 * std::log(10.0) / 10.0;
    const int n = 200000;
    const double h = 66.0 / n;
    double co = 0.0, counter = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = (i + 0.5) * h;
      co += std::exp(-ap * z) * std::exp(-as * (66.0 - z)) * h;
      counter += std::exp(-ap * z) * std::exp(-as * z) * h;
    }
    CHECK(srs_length_factor(f, Direction::Co) == doctest::Approx(co).epsilon(1e-8));
    CHECK(srs_length_factor(f, Direction::Counter) == doctest::Approx(counter).epsilon(1e-8));
  }
  SUBCASE("errors") {
    f.length_km = 0.0;
    CHECK_THROWS_AS(srs_rate_physical(f, traffic(15, Direction::Co), filter_20ghz(), k), InputError);
    f.length_km = 66.0;
    CHECK_THROWS_AS(srs_rate_physical(f, traffic(15, Direction::Co), filter_20ghz(), 0.0),
                    InputError);
  }
}

TEST_CASE("counter-propagation exceeds co-propagation for every preset at 66 km") {
  for (const auto& name : fiber_preset_names()) {
    CAPTURE(name);
    const FiberSpec f = fiber_preset(name);
    CHECK(srs_rate_physical(f, traffic(21, Direction::Counter), filter_20ghz(), 1.0) >
          srs_rate_physical(f, traffic(21, Direction::Co), filter_20ghz(), 1.0));
  }
}

TEST_CASE("Raman counts rise with power and passband, fall with Aeff") {
  const FiberSpec f = fiber_preset("G652-1");
  for (Direction d : {Direction::Co, Direction::Counter}) {
    for (int p = 8; p < 21; ++p) {
      CHECK(srs_rate_paper(f, traffic(p + 1, d), filter_20ghz()) >
            srs_rate_paper(f, traffic(p, d), filter_20ghz()));
      CHECK(srs_rate_physical(f, traffic(p + 1, d), filter_20ghz(), 10.0) >
            srs_rate_physical(f, traffic(p, d), filter_20ghz(), 10.0));
    }
    CHECK(srs_rate_paper(f, traffic(12, d), passband(40)) >
          srs_rate_paper(f, traffic(12, d), passband(20)));
  }
  FiberSpec short_f = synthetic_fiber("standard", 80, 1.0);
  FiberSpec longer = synthetic_fiber("standard", 80, 2.0);
  CHECK(srs_rate_physical(longer, traffic(12, Direction::Co), filter_20ghz(), 10.0) >
        srs_rate_physical(short_f, traffic(12, Direction::Co), filter_20ghz(), 10.0));

  const auto t = traffic(18, Direction::Co);
  const double a = srs_rate_paper(fiber_preset("G654-130-1"), t, filter_20ghz());
  const double b = srs_rate_paper(fiber_preset("G654-110-1"), t, filter_20ghz());
  const double c = srs_rate_paper(fiber_preset("G652-1"), t, filter_20ghz());
  CHECK(a < b);
  CHECK(b < c);
}

TEST_CASE("crosstalk floor") {
  MuxSpec mux;
  CHECK(crosstalk_rate(mux) == 60.0);
  CHECK(crosstalk_rate(mux) / dark_rate(ingaas_2017()) == doctest::Approx(0.04));
  mux.crosstalk_floor_cps = 0.0;
  CHECK(crosstalk_rate(mux) == 0.0);
}

TEST_CASE("four-wave mixing and Brillouin placeholder stays zero") {
  const auto s = make_scenario("G652-1", Direction::Co, 21);
  CHECK(noise_budget(s, 1e5).n_fwm_brillouin == 0.0);
  CHECK(evaluate(s).noise.n_fwm_brillouin == 0.0);
}

TEST_CASE("calibration of the physical coefficient") {
  const auto powers = default_calibration_powers();
  REQUIRE(powers.size() == 14);
  CHECK(powers.front() == 8.0);
  CHECK(powers.back() == 21.0);

  SUBCASE("G654-110 reproduces beta to better than 1%") {
    for (auto dir : {CalibrationDirection::Co, CalibrationDirection::Counter,
                     CalibrationDirection::Both}) {
      const FiberSpec f = fiber_preset("G654-110-1");
      const Calibration cal = calibrate_raman_coeff(f, dir, powers);
      CHECK(cal.residual < 0.01 * f.beta_srs);
      double sum = 0.0;
      int n = 0;
      for (double p : powers)
        for (Direction d : {Direction::Co, Direction::Counter}) {
          if (dir == CalibrationDirection::Co && d == Direction::Counter) continue;
          if (dir == CalibrationDirection::Counter && d == Direction::Co) continue;
          sum += srs_rate_physical(f, traffic(p, d), filter_20ghz(), cal.raman_coeff) /
                 (p * f.length_km);
          ++n;
        }
      CHECK(sum / n == doctest::Approx(f.beta_srs).epsilon(1e-9));
    }
  }
  SUBCASE("linear in beta") {
    FiberSpec f = fiber_preset("G652-2");
    const double k1 = calibrate_raman_coeff(f, CalibrationDirection::Both, powers).raman_coeff;
    f.beta_srs *= 2.0;
    const double k2 = calibrate_raman_coeff(f, CalibrationDirection::Both, powers).raman_coeff;
    CHECK(k2 == doctest::Approx(2.0 * k1).epsilon(1e-12));
  }
  SUBCASE("single power equals the pointwise ratio") {
    const FiberSpec f = fiber_preset("G654-130-1");
    const double k = calibrate_raman_coeff(f, CalibrationDirection::Co, {15.0}).raman_coeff;
    const double expected = f.beta_srs * 15.0 * f.length_km /
                            (std::pow(10.0, 1.5) * srs_length_factor(f, Direction::Co));
    CHECK(k == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(calibrate_raman_coeff(fiber_preset("G652-1"), CalibrationDirection::Co, {}),
                    InputError);
    FiberSpec f = fiber_preset("G652-1");
    f.beta_srs = 0.0;
    CHECK_THROWS_AS(calibrate_raman_coeff(f, CalibrationDirection::Co, powers), InputError);
  }
}

TEST_CASE("direction parsing") {
  CHECK(parse_direction("co") == Direction::Co);
  CHECK(parse_direction("counter") == Direction::Counter);
  CHECK_THROWS_AS(parse_direction("both"), InputError);
  CHECK(parse_calibration_direction(to_string(CalibrationDirection::Both)) ==
        CalibrationDirection::Both);
  CHECK(parse_srs_model("physical") == SrsModel::Physical);
  CHECK_THROWS_AS(parse_srs_model("empirical"), InputError);
  CHECK(wavelength_from_nm(1310) == Wavelength::Nm1310);
}
