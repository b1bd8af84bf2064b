#include "coex/distill.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "coex/crc64.hpp"

namespace coex {

std::string to_string(BlockStatus s) {
  switch (s) {
    case BlockStatus::Ok: return "ok";
    case BlockStatus::QberCap: return "qber_cap";
    case BlockStatus::Insufficient: return "insufficient";
    case BlockStatus::EcFailed: return "ec_failed";
    case BlockStatus::EvFailed: return "ev_failed";
    case BlockStatus::NoKey: return "no_key";
  }
  return "unknown";
}

namespace {

constexpr std::uint64_t kEvLeakBits = 64;
constexpr double kMinQberHint = 1e-3;
constexpr double kMaxQberHint = 0.1;

BitVec random_bits(std::size_t n, std::uint64_t seed) {
  BitVec b(n);
  Rng rng(seed);
  for (auto& w : b.words()) w = rng();
  b.resize(n);
  return b;
}

std::vector<std::uint8_t> estimation_payload(const SiftedBlock& block) {
  PayloadWriter w;
  w.u64(block.slots);
  for (const auto& t : block.tallies)
    for (double v : {t.sent, t.detected, t.sifted, t.errors})
      w.u64(static_cast<std::uint64_t>(std::llround(v)));
  return w.take();
}

}  // namespace

double estimated_final_bits(const Tallies& tallies, const DecoyParams& p,
                            std::uint64_t leaked_bits) {
  const DecoyBounds b = decoy_bounds(finite_size_adjust(tallies, p), p);
  if (!b.certified) return 0.0;
  const double s1 = p.sift_factor * tallies[0].sent * b.y1_lower * p.mu * std::exp(-p.mu);
  return s1 * (1.0 - binary_entropy(b.e1_upper)) - static_cast<double>(leaked_bits) -
         static_cast<double>(kEvLeakBits);
}

DistillSession::DistillSession(const DecoyParams& protocol, std::uint64_t seed,
                               DistillOptions options)
    : protocol_(protocol), seed_(seed), options_(std::move(options)) {
  const BitVec preshared =
      random_bits(kAuthKeyBits * std::max<std::size_t>(1, options_.auth_refill_keys),
                  derive_seed(seed_, 0xA17Bu));
  alice_pool_ = AuthKeyPool(preshared);
  bob_pool_ = AuthKeyPool(preshared);
}

DistillResult DistillSession::process(const SiftedBlock& block) {
  const std::uint64_t index = blocks_++;
  const std::uint64_t block_seed = derive_seed(seed_, index + 1);
  DistillResult res;
  DistillLedger& led = res.ledger;
  led.block = index;
  led.sifted_bits = block.size();
  led.block_seconds = static_cast<double>(block.slots) / protocol_.rep_rate_hz;
  Transcript& tr = res.transcript;
  tr.append(MsgType::Estimation, estimation_payload(block));

  const KeyPair raw = key_bits(block);
  led.key_bits_in = raw.alice.size();
  led.qber = measured_stats(block.tallies).error[0];

  BitVec alice_final, bob_final;
  auto finish_stage = [&](BlockStatus s) { led.status = s; };

  if (static_cast<double>(block.size()) < protocol_.block_size || raw.alice.empty()) {
    finish_stage(BlockStatus::Insufficient);
  } else if (led.qber > protocol_.qber_cap) {
    finish_stage(BlockStatus::QberCap);
  } else {
    const double hint = std::clamp(led.qber, kMinQberHint, kMaxQberHint);
    WinnowOptions wo;
    wo.max_rounds = options_.winnow_max_rounds;
    wo.seed = derive_seed(block_seed, 1);
    WinnowResult wr = winnow_correct(raw.alice, raw.bob, hint, wo);
    for (const auto& m : wr.transcript.messages()) tr.append(m.type, m.payload);
    led.leaked_bits = wr.alice.leaked_bits;
    led.discarded_bits = wr.alice.discarded_bits;
    led.ec_rounds = wr.alice.ec_rounds;

    if (!wr.converged) {
      finish_stage(BlockStatus::EcFailed);
    } else {
      // Bob rebuilds his side from the public messages only.
      const CorrectedBlock bob = winnow_replay(raw.bob, tr);
      const std::uint64_t crc_a = crc64(wr.alice.bits);
      tr.append(MsgType::Crc, PayloadWriter().u64(crc_a).take());
      led.verified = bob.bits.size() == wr.alice.bits.size() && crc64(bob.bits) == crc_a;
      tr.append(MsgType::CrcResult, PayloadWriter().u8(led.verified).take());
      if (!led.verified) {
        finish_stage(BlockStatus::EvFailed);
      } else {
        const std::size_t n = wr.alice.bits.size();
        const double est = estimated_final_bits(block.tallies, protocol_, led.leaked_bits);
        led.pa_factor = n > 0 ? compute_pa_factor(static_cast<double>(n) / led.block_seconds,
                                                  est / led.block_seconds)
                              : 0.0;
        const std::uint64_t pa_seed = derive_seed(block_seed, 2);
        const PASpec spec = make_pa_spec(n, led.pa_factor, pa_seed);
        tr.append(MsgType::PaSeed, PayloadWriter()
                                       .u64(pa_seed)
                                       .u32(static_cast<std::uint32_t>(spec.output_len))
                                       .take());
        if (spec.output_len == 0) {
          finish_stage(BlockStatus::NoKey);
        } else {
          alice_final = toeplitz_pa(wr.alice.bits, spec);
          bob_final = toeplitz_pa(bob.bits, spec);
          finish_stage(BlockStatus::Ok);
        }
      }
    }
  }

  // Authenticate the public transcript: Alice tags, Bob checks his copy.
  AuthKey alice_key = alice_pool_.next();
  AuthKey bob_key = bob_pool_.next();
  led.auth_key_bits = kAuthKeyBits;
  const auto bytes = tr.serialize();
  const AuthTag tag = lfsr_toeplitz_auth(bits_of(bytes), alice_key);
  std::vector<std::uint8_t> received = bytes;
  if (options_.channel) options_.channel(received);
  if (!bob_pool_.accepts(bob_key) || !lfsr_toeplitz_verify(bits_of(received), tag, bob_key))
    throw AuthFailure("transcript authentication failed on block " + std::to_string(index));

  // Refill the pools from fresh key once they cannot cover the next block.
  if (alice_pool_.remaining_bits() < kAuthKeyBits && led.status == BlockStatus::Ok) {
    const std::size_t want = kAuthKeyBits * std::max<std::size_t>(1, options_.auth_refill_keys);
    if (alice_final.size() >= want) {
      BitVec fa(want), fb(want);
      for (std::size_t i = 0; i < want; ++i) {
        fa.set(i, alice_final.get(i));
        fb.set(i, bob_final.get(i));
      }
      BitVec ra(alice_final.size() - want), rb(bob_final.size() - want);
      for (std::size_t i = want; i < alice_final.size(); ++i) {
        ra.set(i - want, alice_final.get(i));
        rb.set(i - want, bob_final.get(i));
      }
      alice_pool_.replenish(std::move(fa));
      bob_pool_.replenish(std::move(fb));
      alice_final = std::move(ra);
      bob_final = std::move(rb);
      led.refill_bits = want;
    }
  }

  led.final_bits = alice_final.size();
  led.throughput_bps =
      led.block_seconds > 0 ? static_cast<double>(led.final_bits) / led.block_seconds : 0.0;
  res.alice_key = std::move(alice_final);
  res.bob_key = std::move(bob_final);
  return res;
}

std::string ledger_csv_header() {
  return "block,qber,sifted_bits,key_bits_in,leaked_bits,discarded_bits,ec_rounds,verified,"
         "pa_factor,final_bits,auth_key_bits,refill_bits,block_seconds,throughput_bps,status";
}

std::string ledger_csv_row(const DistillLedger& l) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%llu,%.6f,%llu,%llu,%llu,%llu,%d,%d,%.6f,%llu,%llu,%llu,%.6f,%.3f,%s",
                static_cast<unsigned long long>(l.block), l.qber,
                static_cast<unsigned long long>(l.sifted_bits),
                static_cast<unsigned long long>(l.key_bits_in),
                static_cast<unsigned long long>(l.leaked_bits),
                static_cast<unsigned long long>(l.discarded_bits), l.ec_rounds, l.verified ? 1 : 0,
                l.pa_factor, static_cast<unsigned long long>(l.final_bits),
                static_cast<unsigned long long>(l.auth_key_bits),
                static_cast<unsigned long long>(l.refill_bits), l.block_seconds, l.throughput_bps,
                to_string(l.status).c_str());
  return buf;
}

}  // namespace coex
