// Serial reference kernels against their OpenMP forms.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "coex/keyrate.hpp"
#include "coex/protocol_sim.hpp"
#include "coex/scenario.hpp"
#include "coex/toeplitz.hpp"

using namespace coex;

namespace {

std::vector<double> lengths() {
  std::vector<double> v(200);
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

std::vector<double> powers() {
  std::vector<double> v;
  for (double p = 8.0; p <= 21.0; p += 0.25) v.push_back(p);
  return v;
}

BitVec random_bits(std::size_t n, std::uint64_t seed) {
  BitVec b(n);
  Rng rng(seed);
  for (auto& w : b.words()) w = rng();
  b.resize(n);
  return b;
}

const CoexistenceScenario& scenario() {
  static const CoexistenceScenario s = load_scenario("snspd-g654-110-counter-21dBm");
  return s;
}

void BM_SweepDistanceSerial(benchmark::State& st) {
  const auto l = lengths();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_distance_serial(scenario(), l, SrsModel::Physical));
}
void BM_SweepDistance(benchmark::State& st) {
  const auto l = lengths();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_distance(scenario(), l, SrsModel::Physical));
}

void BM_SweepPowerSerial(benchmark::State& st) {
  const auto p = powers();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_power_serial(scenario(), p));
}
void BM_SweepPower(benchmark::State& st) {
  const auto p = powers();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_power(scenario(), p));
}

void BM_SimulateBlockSerial(benchmark::State& st) {
  const SimConfig cfg = sim_config(make_scenario("G652-1", Direction::Co, 21));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(simulate_block_serial(cfg, ++seed, 500000));
}
void BM_SimulateBlock(benchmark::State& st) {
  const SimConfig cfg = sim_config(make_scenario("G652-1", Direction::Co, 21));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(simulate_block(cfg, ++seed, 500000));
}

void BM_ToeplitzNaive(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const BitVec x = random_bits(n, 1), seed = random_bits(n + n / 4 - 1, 2);
  for (auto _ : st) benchmark::DoNotOptimize(toeplitz_naive(x, seed, n / 4));
}
void BM_ToeplitzSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const BitVec x = random_bits(n, 1), seed = random_bits(n + n / 4 - 1, 2);
  for (auto _ : st) benchmark::DoNotOptimize(toeplitz_hash_serial(x, seed, n / 4));
}
void BM_Toeplitz(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const BitVec x = random_bits(n, 1), seed = random_bits(n + n / 4 - 1, 2);
  for (auto _ : st) benchmark::DoNotOptimize(toeplitz_hash(x, seed, n / 4));
}

}  // namespace

BENCHMARK(BM_SweepDistanceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepDistance)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepPowerSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepPower)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateBlockSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateBlock)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ToeplitzNaive)->Arg(1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ToeplitzSerial)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Toeplitz)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
