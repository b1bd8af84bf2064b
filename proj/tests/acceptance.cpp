// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "coex/crc64.hpp"
#include "coex/detector_model.hpp"
#include "coex/distill.hpp"
#include "coex/keyrate.hpp"
#include "coex/randomness.hpp"
#include "coex/reproduce.hpp"
#include "coex/scenario.hpp"
#include "coex/toeplitz.hpp"
#include "coex/winnow.hpp"

using namespace coex;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kDeadTimeTolCps = 1.0;
constexpr double kQberLo = 0.038, kQberHi = 0.047;
constexpr double kCoLo = 2250, kCoHi = 9000;
constexpr double kCounterLo = 2550, kCounterHi = 10200;
constexpr double kG652Anchor = 3000, kG652Factor = 2.0;
constexpr int kDecoyChannels = 1000;
constexpr double kMcViolationMax = 0.001;
constexpr int kWinnowSeeds = 100;
constexpr std::size_t kWinnowBits = 500000;
constexpr double kWinnowQber = 0.025;
constexpr double kResidualMax = 1e-6;
constexpr double kEffLo = 1.2, kEffHi = 1.5;
constexpr int kEffRunsMin = 95;
constexpr int kToeplitzTriples = 100;
constexpr std::size_t kCrcBits = 4096;
constexpr int kCrcBlocks = 4;
constexpr int kDistillBlocks = 1000;
constexpr double kRandAlpha = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

BitVec random_bits(std::size_t n, Rng& rng) {
  BitVec b(n);
  for (auto& w : b.words()) w = rng();
  b.resize(n);
  return b;
}

Outcome c1_dead_time() {
  const double y = apply_dead_time(4e5, ingaas_2017());
  return {std::abs(y - 363636.0) <= kDeadTimeTolCps, fmt("%.3f cps", y)};
}

Outcome c2_qber_anchor() {
  const double q = qber_from_qsnr(11.0, DecoyParams{});
  return {q >= kQberLo && q <= kQberHi, fmt("QBER(11 dB) = %.3f%%", 100 * q)};
}

Outcome c3_headline() {
  const double co = evaluate(make_scenario("G654-110-1", Direction::Co, 21)).rate_bps;
  const double counter = evaluate(make_scenario("G654-110-2", Direction::Counter, 21)).rate_bps;
  const double g652 = evaluate(make_scenario("G652-1", Direction::Co, 21)).rate_bps;
  const bool ok = co >= kCoLo && co <= kCoHi && counter >= kCounterLo && counter <= kCounterHi &&
                  g652 >= kG652Anchor / kG652Factor && g652 <= kG652Anchor * kG652Factor;
  return {ok, fmt("G654-110 co %.0f bps, counter %.0f bps, G652 co %.0f bps", co, counter, g652)};
}

Outcome gating(const Reproduction& r) {
  int failed = 0, total = 0;
  std::string first;
  for (const auto& c : r.checks) {
    if (!c.gating) continue;
    ++total;
    if (!c.passed) {
      if (!failed) first = c.name + " (" + c.detail + ")";
      ++failed;
    }
  }
  if (!failed) return {true, fmt("%d gating checks", total)};
  return {false, fmt("%d of %d gating checks failed; first: %s", failed, total, first.c_str())};
}

Outcome c4_table2() { return gating(reproduce_table2()); }
Outcome c5_fig4() { return gating(reproduce_fig4()); }

/// Exact single-photon yield and error of the Poissonian channel.
void true_single(double eta, double y0, double e_d, double& y1, double& e1) {
  y1 = 1.0 - (1.0 - y0) * (1.0 - eta);
  e1 = (0.5 * y0 + e_d * eta * (1.0 - y0)) / y1;
}

Outcome c6_decoy() {
  Rng rng(606);
  const DecoyParams base;
  int exact_bad = 0, mc_bad = 0, mc_runs = 0;
  for (int t = 0; t < kDecoyChannels; ++t) {
    DecoyParams p = base;
    p.e_d = 0.05 * uniform01(rng);
    const double eta = std::pow(10.0, -3.0 - 3.0 * uniform01(rng));
    const double y0 = std::pow(10.0, -7.0 + 2.5 * uniform01(rng));
    double y1, e1;
    true_single(eta, y0, p.e_d, y1, e1);
    const ChannelStats exact = expected_stats(eta, y0, p);
    const DecoyBounds b = decoy_bounds(exact, p);
    if (b.y1_lower > y1 * (1 + 1e-12) || b.e1_upper < e1 * (1 - 1e-12)) ++exact_bad;

    // Sampled around block_size sifted bits; the draw may land just short of it.
    const Tallies tallies = sample_tallies(exact, p, rng);
    DecoyParams gate = p;
    gate.block_size = 0.99 * p.block_size;
    const DecoyBounds fb = decoy_bounds(finite_size_adjust(tallies, gate), p);
    ++mc_runs;
    if (fb.y1_lower > y1 || fb.e1_upper < e1) ++mc_bad;
  }
  const double mc_rate = static_cast<double>(mc_bad) / mc_runs;
  return {exact_bad == 0 && mc_rate <= kMcViolationMax,
          fmt("exact violations %d/%d, Monte Carlo violations %d/%d", exact_bad, kDecoyChannels,
              mc_bad, mc_runs)};
}

Outcome c7_winnow() {
  int residual_bad = 0, eff_ok = 0;
  double eff_min = 1e9, eff_max = 0;
  for (int s = 0; s < kWinnowSeeds; ++s) {
    Rng rng(derive_seed(707, s));
    const BitVec a = random_bits(kWinnowBits, rng);
    BitVec b = a;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (bernoulli(rng, kWinnowQber)) b.flip(i);
    const double q = static_cast<double>((a ^ b).popcount()) / kWinnowBits;
    WinnowOptions o;
    o.seed = derive_seed(708, s);
    const WinnowResult r = winnow_correct(a, b, kWinnowQber, o);
    const std::size_t n = r.alice.bits.size();
    const double residual =
        r.converged && n == r.bob.bits.size()
            ? static_cast<double>((r.alice.bits ^ r.bob.bits).popcount()) / static_cast<double>(n)
            : 1.0;
    if (!(residual < kResidualMax)) ++residual_bad;
    const double eff = r.alice.leaked_bits / (kWinnowBits * binary_entropy(q));
    eff_min = std::min(eff_min, eff);
    eff_max = std::max(eff_max, eff);
    if (eff >= kEffLo && eff <= kEffHi) ++eff_ok;
  }
  return {residual_bad == 0 && eff_ok >= kEffRunsMin,
          fmt("residual failures %d/%d, efficiency in band %d/%d (range %.3f..%.3f)",
              residual_bad, kWinnowSeeds, eff_ok, kWinnowSeeds, eff_min, eff_max)};
}

Outcome c8_toeplitz() {
  Rng rng(808);
  int equal = 0;
  for (int t = 0; t < kToeplitzTriples; ++t) {
    const std::size_t n = 1 + rng() % 1024;
    const std::size_t m = 1 + rng() % n;
    const BitVec x = random_bits(n, rng);
    const BitVec seed = random_bits(n + m - 1, rng);
    equal += toeplitz_hash(x, seed, m) == toeplitz_naive(x, seed, m);
  }
  return {equal == kToeplitzTriples, fmt("%d/%d triples bit-exact", equal, kToeplitzTriples)};
}

Outcome c9_crc() {
  Rng rng(909);
  int detected = 0;
  for (int blk = 0; blk < kCrcBlocks; ++blk) {
    const BitVec a = random_bits(kCrcBits, rng);
    for (std::size_t i = 0; i < kCrcBits; ++i) {
      BitVec b = a;
      b.flip(i);
      detected += !crc64_verify(a, b);
    }
  }
  const int total = kCrcBlocks * static_cast<int>(kCrcBits);
  return {detected == total, fmt("%d/%d flips detected", detected, total)};
}

Outcome c10_distill() {
  const auto& fibers = fiber_preset_names();
  int mismatched = 0, with_key = 0, aborted = 0;
  BitVec stream;
  std::vector<DistillSession> sessions;
  std::vector<SimConfig> configs;
  for (std::size_t f = 0; f < fibers.size(); ++f) {
    const Direction d = fibers[f].back() == '1' ? Direction::Co : Direction::Counter;
    configs.push_back(sim_config(make_scenario(fibers[f], d, 21)));
    sessions.emplace_back(configs.back().protocol, derive_seed(1010, f));
  }
  for (int b = 0; b < kDistillBlocks; ++b) {
    const std::size_t f = static_cast<std::size_t>(b) % fibers.size();
    const auto min_sifted = static_cast<std::uint64_t>(configs[f].protocol.block_size);
    const SiftedBlock block = simulate_block(configs[f], derive_seed(1011, b), min_sifted);
    try {
      const DistillResult r = sessions[f].process(block);
      if (!(r.alice_key == r.bob_key)) ++mismatched;
      if (r.ledger.status == BlockStatus::Ok) {
        ++with_key;
        for (std::size_t i = 0; i < r.alice_key.size(); ++i) stream.push_back(r.alice_key.get(i));
      }
    } catch (const AuthFailure&) {
      ++aborted;
    }
  }
  const RandomnessResult mono = monobit_test(stream, kRandAlpha);
  const RandomnessResult runs = runs_test(stream, kRandAlpha);
  return {mismatched == 0 && aborted == 0 && with_key > 0 && mono.pass && runs.pass,
          fmt("%d blocks, %d with key, %d mismatched, %d aborted, %zu key bits, monobit p=%.4f, "
              "runs p=%.4f",
              kDistillBlocks, with_key, mismatched, aborted, stream.size(), mono.p_value,
              runs.p_value)};
}

std::string run_cli(const std::string& args, int& code) {
  const fs::path dir = fs::temp_directory_path() / ("coex-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path out = dir / "stdout";
  const std::string cmd =
      std::string("\"") + COEXSIM_PATH + "\" " + args + " >\"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c11_determinism() {
  const std::vector<std::string> commands = {
      "evaluate",
      "--srs-model physical evaluate",
      "sweep-power",
      "sweep-distance",
      "--scenario snspd-g654-110-counter-21dBm sweep-distance",
      "calibrate",
      "distill --blocks 2",
      "reproduce table2",
      "reproduce fig2",
      "reproduce fig3",
      "reproduce fig4",
      "reproduce fig5",
  };
  int identical = 0;
  std::string first_bad;
  for (const auto& c : commands) {
    int c1 = 0, c2 = 0;
    const std::string args = "--seed 1111 " + c;
    const std::string a = run_cli(args, c1);
    const std::string b = run_cli(args, c2);
    if (a == b && c1 == c2 && !a.empty())
      ++identical;
    else if (first_bad.empty())
      first_bad = c;
  }
  const int total = static_cast<int>(commands.size());
  return {identical == total,
          fmt("%d/%d commands byte-identical%s%s", identical, total,
              first_bad.empty() ? "" : "; first difference: ", first_bad.c_str())};
}

}  // namespace

/// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dead-time formula", c1_dead_time},
      {"QSNR/QBER anchor", c2_qber_anchor},
      {"headline rates", c3_headline},
      {"filter and fiber matrix structure", c4_table2},
      {"distance anchors", c5_fig4},
      {"decoy-bound soundness", c6_decoy},
      {"Winnow", c7_winnow},
      {"Toeplitz oracle", c8_toeplitz},
      {"CRC-64 error verification", c9_crc},
      {"end-to-end distill", c10_distill},
      {"determinism", c11_determinism},
  };
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k >= 1 && k <= static_cast<int>(criteria.size())) selected[k - 1] = true;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
