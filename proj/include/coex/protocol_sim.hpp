#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coex/bitvec.hpp"
#include "coex/keyrate.hpp"
#include "coex/rng.hpp"

namespace coex {

enum class Cause : std::uint8_t { Signal = 0, Dark, Srs, Afterpulse, Crosstalk };

std::string to_string(Cause c);

/// Basis 0 is rectilinear, 1 diagonal.
struct PulseRecord {
  std::uint64_t index = 0;
  std::uint8_t basis = 0;
  std::uint8_t bit = 0;
  IntensityClass cls = IntensityClass::Signal;
};

/// One registered single-click slot. Detector d measures basis d / 2 and
/// reports bit d % 2.
struct DetectionRecord {
  std::uint64_t index = 0;
  std::uint8_t detector = 0;
  Cause cause = Cause::Signal;
  std::uint8_t basis_bob = 0;

  std::uint8_t bit_bob() const { return detector & 1u; }
};

/// Channel and receiver parameters of a simulation. noise.n_after is ignored;
/// afterpulses are generated from registered clicks.
struct SimConfig {
  double link_loss_db = 0.0;
  NoiseBudget noise;
  DetectorSpec detector;
  DecoyParams protocol;
};

SimConfig sim_config(const CoexistenceScenario& s);

/// Per-slot click probability of the signal path for each class.
std::array<double, 3> signal_click_probs(const SimConfig& cfg);

std::vector<PulseRecord> emit_pulses(std::uint64_t n, const DecoyParams& protocol,
                                     std::uint64_t seed);

/// Slot-by-slot reference channel and detection.
std::vector<DetectionRecord> transmit_detect(const std::vector<PulseRecord>& pulses,
                                             double link_loss_db, const NoiseBudget& noise,
                                             const DetectorSpec& det,
                                             const DecoyParams& protocol, std::uint64_t seed);

/// Sifted key material with per-class tallies and cause-level ground truth.
struct SiftedBlock {
  BitVec alice;
  BitVec bob;
  std::vector<std::uint64_t> positions;
  std::vector<IntensityClass> classes;
  Tallies tallies{};
  /// Sifted counts and errors caused by the signal path, per class.
  std::array<std::uint64_t, 3> signal_sifted{};
  std::array<std::uint64_t, 3> signal_errors{};
  std::uint64_t slots = 0;

  std::size_t size() const { return alice.size(); }
  double measured_qber() const;
};

SiftedBlock sift(const std::vector<PulseRecord>& pulses,
                 const std::vector<DetectionRecord>& detections);

/// Signal-class sifted bits of both parties, in slot order.
struct KeyPair {
  BitVec alice;
  BitVec bob;
};
KeyPair key_bits(const SiftedBlock& block);

/// Event-driven simulation. Slots are split into fixed ranges of
/// kPartitionSlots, each drawn from its own derived seed after a warm-up of
/// one dead time, so the result does not depend on how ranges are scheduled.
inline constexpr std::uint64_t kPartitionSlots = std::uint64_t{1} << 24;

struct SimulatedSlot {
  std::uint64_t slot = 0;
  IntensityClass cls = IntensityClass::Signal;
  std::uint8_t alice_basis = 0;
  std::uint8_t alice_bit = 0;
  std::uint8_t detector = 0;
  Cause cause = Cause::Signal;
};

struct PartitionResult {
  std::vector<SimulatedSlot> clicks;
  std::array<std::uint64_t, 3> sent{};
};

PartitionResult simulate_partition(const SimConfig& cfg, std::uint64_t seed,
                                   std::uint64_t partition);

/// Simulates whole partitions until at least min_sifted sifted bits exist.
SiftedBlock simulate_block(const SimConfig& cfg, std::uint64_t seed, std::uint64_t min_sifted);
SiftedBlock simulate_block_serial(const SimConfig& cfg, std::uint64_t seed,
                                  std::uint64_t min_sifted);

/// Binomial draw of block tallies around exact channel statistics.
Tallies sample_tallies(const ChannelStats& stats, const DecoyParams& protocol, Rng& rng);

/// Binary block dump. Layout (little-endian):
///   "CXBK" | u16 version=1 | u64 scenario hash | u64 nbits |
///   3 x (u64 sent, detected, sifted, errors) | alice bytes | bob bytes
/// with bits packed MSB-first, ceil(nbits / 8) bytes per party.
void write_block_dump(std::ostream& out, const SiftedBlock& block, std::uint64_t scenario_hash);

struct BlockDump {
  std::uint64_t scenario_hash = 0;
  Tallies tallies{};
  BitVec alice;
  BitVec bob;
};
BlockDump read_block_dump(std::istream& in);

}  // namespace coex
