// coexsim: command-line driver for the coexistence key-rate model.
//
// Exit codes: 0 ok or feasible, 2 infeasible, 3 input error,
// 4 reproduction-check failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coex/distill.hpp"
#include "coex/keyrate.hpp"
#include "coex/protocol_sim.hpp"
#include "coex/reproduce.hpp"
#include "coex/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInput = 3;
constexpr int kExitRepro = 4;

struct Globals {
  std::string scenario = "g654-110-co-21dBm";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string srs_model;
};

/// Everything a command prints, emitted only once the command has finished.
struct Output {
  std::string csv;
  std::string summary;
  int code = kExitOk;
};

std::vector<double> range(double from, double to, double step) {
  if (!(step > 0.0)) throw coex::InputError("step must be > 0");
  if (to < from) throw coex::InputError("range end must not precede its start");
  std::vector<double> v;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(from + static_cast<double>(i) * step);
  return v;
}

coex::CoexistenceScenario load(const Globals& g) {
  coex::CoexistenceScenario s = coex::load_scenario(g.scenario);
  if (g.seed) s.seed = *g.seed;
  if (!g.srs_model.empty()) s.srs.model = coex::parse_srs_model(g.srs_model);
  return s;
}

std::string summary_line(const coex::CoexistenceScenario& s, const coex::KeyRateReport& r) {
  char qsnr[32] = "inf";
  if (!r.qsnr.unbounded) std::snprintf(qsnr, sizeof qsnr, "%.2f", r.qsnr.db);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s: %s %.1f km, %.1f dBm %s, %s model: QSNR %s dB, QBER %.2f%%, rate %.1f bps%s\n",
                s.name.c_str(), s.fiber.name.c_str(), s.fiber.length_km,
                s.traffic.launch_power_dbm, coex::to_string(s.traffic.direction).c_str(),
                coex::to_string(s.srs.model).c_str(),
                qsnr, 100.0 * r.qber,
                r.rate_bps, r.feasible ? "" : " (infeasible)");
  return buf;
}

Output cmd_evaluate(const Globals& g) {
  const auto s = load(g);
  const auto r = coex::evaluate(s);
  Output o;
  o.csv = coex::report_csv_header() + "\n" + coex::report_csv_row(s, r) + "\n";
  o.summary = summary_line(s, r);
  o.code = r.feasible ? kExitOk : kExitInfeasible;
  return o;
}

Output sweep_output(const coex::CoexistenceScenario& base,
                    const std::vector<coex::CoexistenceScenario>& points,
                    const std::vector<coex::KeyRateReport>& reports) {
  Output o;
  o.csv = coex::report_csv_header() + "\n";
  std::size_t feasible = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    o.csv += coex::report_csv_row(points[i], reports[i]) + "\n";
    feasible += reports[i].feasible;
  }
  o.summary = base.name + ": " + std::to_string(feasible) + " of " +
              std::to_string(reports.size()) + " points feasible\n";
  return o;
}

Output cmd_sweep_power(const Globals& g, double from, double to, double step) {
  const auto s = load(g);
  const auto powers = range(from, to, step);
  const auto reports = coex::sweep_power(s, powers);
  std::vector<coex::CoexistenceScenario> points(powers.size(), s);
  for (std::size_t i = 0; i < powers.size(); ++i) points[i].traffic.launch_power_dbm = powers[i];
  return sweep_output(s, points, reports);
}

Output cmd_sweep_distance(const Globals& g, double from, double to, double step) {
  const auto s = load(g);
  const auto lengths = range(from, to, step);
  if (lengths.front() < 0.0) throw coex::InputError("length_km must be >= 0");
  const auto reports = coex::sweep_distance(s, lengths, s.srs.model);
  std::vector<coex::CoexistenceScenario> points;
  for (double L : lengths) points.push_back(coex::at_length(s, L));
  return sweep_output(s, points, reports);
}

Output cmd_reproduce(const Globals& g, const std::string& target) {
  coex::ReproOptions opt;
  if (g.seed) opt.seed = *g.seed;
  if (!g.srs_model.empty()) opt.model = coex::parse_srs_model(g.srs_model);
  const auto rep = coex::reproduce(target, opt);
  Output o;
  o.csv = rep.csv;
  for (const auto& c : rep.checks)
    o.summary += std::string(c.passed ? "PASS" : (c.gating ? "FAIL" : "NOTE")) + " " + target +
                 ": " + c.name + " (" + c.detail + ")\n";
  o.code = rep.passed() ? kExitOk : kExitRepro;
  return o;
}

Output cmd_calibrate(const Globals& g, std::string fiber, const std::string& direction) {
  const auto s = load(g);
  const coex::FiberSpec f = fiber.empty() ? s.fiber : coex::fiber_preset(fiber);
  const auto dir = coex::parse_calibration_direction(direction);
  const auto cal = coex::calibrate_raman_coeff(f, dir, coex::default_calibration_powers());
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.9f,%.9e,%d\n", f.name.c_str(),
                coex::to_string(dir).c_str(), f.beta_srs, cal.raman_coeff, cal.residual,
                cal.iterations);
  Output o;
  o.csv = std::string("fiber,calibration,beta_srs_cps_per_dbm_km,raman_coeff_cps_per_mw_km,"
                      "residual,iterations\n") +
          buf;
  std::snprintf(buf, sizeof buf, "%s: K = %.6g cps/(mW km), residual %.3g (%.4f%% of beta)\n",
                f.name.c_str(), cal.raman_coeff, cal.residual,
                100.0 * cal.residual / f.beta_srs);
  o.summary = buf;
  return o;
}

Output cmd_distill(const Globals& g, long blocks) {
  if (blocks < 0) throw coex::InputError("blocks must be >= 0");
  const auto s = load(g);
  const coex::SimConfig cfg = coex::sim_config(s);
  coex::DistillSession session(s.protocol, s.seed);
  Output o;
  o.csv = coex::ledger_csv_header() + "\n";
  const auto min_sifted = static_cast<std::uint64_t>(s.protocol.block_size);
  double qber = 0.0, bits = 0.0, seconds = 0.0;
  long ok = 0;
  for (long b = 0; b < blocks; ++b) {
    const auto block =
        coex::simulate_block(cfg, coex::derive_seed(s.seed, 0x5100u + static_cast<std::uint64_t>(b)),
                             min_sifted);
    const auto res = session.process(block);
    if (!(res.alice_key == res.bob_key)) throw std::runtime_error("distilled keys differ");
    o.csv += coex::ledger_csv_row(res.ledger) + "\n";
    qber += res.ledger.qber;
    bits += static_cast<double>(res.ledger.final_bits);
    seconds += res.ledger.block_seconds;
    ok += res.ledger.status == coex::BlockStatus::Ok;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: %ld blocks, %ld with key, mean QBER %.3f%%, final-key throughput %.1f bps\n",
                s.name.c_str(), blocks, ok, blocks ? 100.0 * qber / blocks : 0.0,
                seconds > 0 ? bits / seconds : 0.0);
  o.summary = buf;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum/classical fiber coexistence simulator"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--scenario", g.scenario, "Scenario file or bundled scenario name");
  app.add_option("--seed", g.seed, "Override the scenario seed");
  app.add_option("--out", g.out, "Write CSV to this path instead of stdout");
  app.add_option("--srs-model", g.srs_model, "Raman model: paper or physical");
  app.fallthrough();

  struct Range {
    double from, to, step;
  };
  Range pr{8.0, 21.0, 1.0}, dr{1.0, 200.0, 1.0};
  auto* evaluate = app.add_subcommand("evaluate", "Single-point key-rate evaluation");
  auto* sweep_p = app.add_subcommand("sweep-power", "Launch-power sweep");
  sweep_p->add_option("--from", pr.from, "First launch power, dBm")->capture_default_str();
  sweep_p->add_option("--to", pr.to, "Last launch power, dBm")->capture_default_str();
  sweep_p->add_option("--step", pr.step, "Step, dB")->capture_default_str();
  auto* sweep_d = app.add_subcommand("sweep-distance", "Fiber-length sweep");
  sweep_d->add_option("--from", dr.from, "First length, km")->capture_default_str();
  sweep_d->add_option("--to", dr.to, "Last length, km")->capture_default_str();
  sweep_d->add_option("--step", dr.step, "Step, km")->capture_default_str();
  std::string target;
  auto* repro = app.add_subcommand("reproduce", "Reproduce a published table or figure");
  repro->add_option("target", target, "table2, fig2, fig3, fig4 or fig5")->required();
  std::string fiber, cal_dir = "both";
  auto* calibrate = app.add_subcommand("calibrate", "Fit the physical Raman coefficient");
  calibrate->add_option("--fiber", fiber, "Fiber preset (default: scenario fiber)");
  calibrate->add_option("--direction", cal_dir, "co, counter or both");
  long blocks = 1;
  auto* distill = app.add_subcommand("distill", "Simulate and distill key blocks");
  distill->add_option("--blocks", blocks, "Number of blocks")->default_val(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  Output o;
  try {
    if (*evaluate) o = cmd_evaluate(g);
    else if (*sweep_p) o = cmd_sweep_power(g, pr.from, pr.to, pr.step);
    else if (*sweep_d) o = cmd_sweep_distance(g, dr.from, dr.to, dr.step);
    else if (*repro) o = cmd_reproduce(g, target);
    else if (*calibrate) o = cmd_calibrate(g, fiber, cal_dir);
    else if (*distill) o = cmd_distill(g, blocks);
  } catch (const coex::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (g.out.empty()) {
    std::cout << o.csv;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!(f << o.csv)) {
      std::cerr << "input error: cannot write " << g.out << "\n";
      return kExitInput;
    }
  }
  std::cerr << o.summary;
  return o.code;
}
