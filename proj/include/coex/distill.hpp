#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coex/auth.hpp"
#include "coex/protocol_sim.hpp"
#include "coex/toeplitz.hpp"
#include "coex/transcript.hpp"
#include "coex/winnow.hpp"

namespace coex {

enum class BlockStatus { Ok, QberCap, Insufficient, EcFailed, EvFailed, NoKey };

std::string to_string(BlockStatus s);

struct DistillLedger {
  std::uint64_t block = 0;
  double qber = 0.0;  ///< signal-class error rate of the block
  std::uint64_t sifted_bits = 0;
  std::uint64_t key_bits_in = 0;  ///< signal-class sifted bits entering Winnow
  std::uint64_t leaked_bits = 0;
  std::uint64_t discarded_bits = 0;
  int ec_rounds = 0;
  bool verified = false;
  double pa_factor = 0.0;
  std::uint64_t final_bits = 0;
  std::uint64_t auth_key_bits = 0;
  std::uint64_t refill_bits = 0;  ///< final-key bits moved into the auth pools
  double block_seconds = 0.0;
  double throughput_bps = 0.0;
  BlockStatus status = BlockStatus::Ok;
};

struct DistillResult {
  BitVec alice_key;
  BitVec bob_key;
  DistillLedger ledger;
  Transcript transcript;
};

struct DistillOptions {
  int winnow_max_rounds = 10;
  /// Keys' worth of final key moved into the auth pools once they run dry.
  std::size_t auth_refill_keys = 16;
  /// Applied to the serialized transcript on its way to Bob.
  std::function<void(std::vector<std::uint8_t>&)> channel;
};

/// Stateful two-party pipeline: authentication pools persist across blocks.
/// Stages per block: parameter estimation and QBER cap, Winnow (Bob replays
/// from the transcript), CRC-64 check, PA factor from decoy bounds on the
/// block's own tallies, Toeplitz hashing, transcript authentication.
/// Throws AuthFailure when Bob rejects the transcript tag.
class DistillSession {
 public:
  DistillSession(const DecoyParams& protocol, std::uint64_t seed, DistillOptions options = {});

  DistillResult process(const SiftedBlock& block);

  const AuthKeyPool& alice_pool() const { return alice_pool_; }
  const AuthKeyPool& bob_pool() const { return bob_pool_; }

 private:
  DecoyParams protocol_;
  std::uint64_t seed_;
  DistillOptions options_;
  AuthKeyPool alice_pool_;
  AuthKeyPool bob_pool_;
  std::uint64_t blocks_ = 0;
};

/// Estimated secure bits of a block: s1 (1 - H2(e1_upper)) - leaked - 64.
double estimated_final_bits(const Tallies& tallies, const DecoyParams& protocol,
                            std::uint64_t leaked_bits);

std::string ledger_csv_header();
std::string ledger_csv_row(const DistillLedger& l);

}  // namespace coex
