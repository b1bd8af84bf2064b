#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "coex/auth.hpp"
#include "coex/crc64.hpp"
#include "coex/distill.hpp"
#include "coex/randomness.hpp"
#include "coex/scenario.hpp"
#include "coex/toeplitz.hpp"
#include "coex/transcript.hpp"
#include "coex/winnow.hpp"

using namespace coex;

namespace {

BitVec random_bits(std::size_t n, Rng& rng) {
  BitVec b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, rng() & 1u);
  return b;
}

/// Bob's copy with each bit flipped independently with probability q.
BitVec noisy_copy(const BitVec& a, double q, Rng& rng) {
  BitVec b = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (bernoulli(rng, q)) b.flip(i);
  return b;
}

/// Bitwise shift-and-add reference for multiplication modulo x^64 + low.
std::uint64_t mulmod_reference(std::uint64_t a, std::uint64_t b, std::uint64_t low) {
  std::uint64_t r = 0;
  for (int i = 63; i >= 0; --i) {
    const bool carry = r >> 63;
    r <<= 1;
    if (carry) r ^= low;
    if ((b >> i) & 1u) r ^= a;
  }
  return r;
}

/// Product of two polynomials of degree 32 given by their low words, low 64 bits.
std::uint64_t product_low(std::uint64_t f, std::uint64_t g) {
  const unsigned __int128 F = (static_cast<unsigned __int128>(1) << 32) | f;
  const unsigned __int128 G = (static_cast<unsigned __int128>(1) << 32) | g;
  unsigned __int128 r = 0;
  for (int i = 0; i <= 32; ++i)
    if ((G >> i) & 1) r ^= F << i;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

// --------------------------------------------------------------------------
// CRC-64

TEST_CASE("CRC-64/ECMA-182 check value") {
  const char* msg = "123456789";
  const std::vector<std::uint8_t> bytes(msg, msg + 9);
  CHECK(crc64(bytes) == 0x6C40DF5F0B497347ULL);
  CHECK(crc64(BitVec::from_bytes(bytes, 72)) == 0x6C40DF5F0B497347ULL);
  CHECK(crc64(std::vector<std::uint8_t>{}) == 0);
}

TEST_CASE("CRC-64 bit-level input") {
  Rng rng(4);
  const BitVec a = random_bits(1001, rng);
  BitVec b = a;
  b.push_back(false);
  CHECK(crc64(a) != crc64(b));
  CHECK(crc64_verify(a, a));
  CHECK_FALSE(crc64_verify(a, b));
}

TEST_CASE("CRC-64 detects every single-bit flip of a 4096-bit block") {
  Rng rng(1);
  const BitVec a = random_bits(4096, rng);
  int detected = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    BitVec b = a;
    b.flip(i);
    detected += !crc64_verify(a, b);
  }
  CHECK(detected == 4096);
}

TEST_CASE("CRC-64 shows no collisions on random 512-bit pairs") {
  Rng rng(2);
  int collisions = 0;
  for (int t = 0; t < 100000; ++t) {
    const BitVec a = random_bits(512, rng);
    const BitVec b = random_bits(512, rng);
    if (!(a == b) && crc64(a) == crc64(b)) ++collisions;
  }
  CHECK(collisions == 0);
}

// --------------------------------------------------------------------------
// Toeplitz privacy amplification

TEST_CASE("Toeplitz hashing equals the naive matrix product") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 1024;
    const std::size_t m = 1 + rng() % n;
    const BitVec x = random_bits(n, rng);
    const BitVec seed = random_bits(n + m - 1, rng);
    const BitVec ref = toeplitz_naive(x, seed, m);
    CHECK(toeplitz_hash(x, seed, m) == ref);
    CHECK(toeplitz_hash_serial(x, seed, m) == ref);
  }
}

TEST_CASE("Toeplitz orientation") {
  // T[i][j] = seed[j - i] above the diagonal, seed[n + i - j - 1] below.
  const BitVec seed = BitVec::from_string("10110" "01");
  const BitVec x = BitVec::from_string("01000");
  // Column 1 of the 3 x 5 matrix: seed[1], seed[0], seed[5].
  CHECK(toeplitz_naive(x, seed, 3).to_string() == "010");
  const BitVec e0 = BitVec::from_string("10000");
  CHECK(toeplitz_naive(e0, seed, 3).to_string() == "101");
}

TEST_CASE("Toeplitz identity, zero input and linearity") {
  const std::size_t n = 300;
  BitVec id_seed(2 * n - 1);
  id_seed.set(0, true);
  Rng rng(8);
  const BitVec x = random_bits(n, rng);
  CHECK(toeplitz_hash(x, id_seed, n) == x);
  CHECK(toeplitz_hash(BitVec(n), random_bits(n + 200 - 1, rng), 200).popcount() == 0);

  const BitVec seed = random_bits(n + 150 - 1, rng);
  const BitVec a = random_bits(n, rng), b = random_bits(n, rng);
  CHECK(toeplitz_hash(a ^ b, seed, 150) == (toeplitz_hash(a, seed, 150) ^ toeplitz_hash(b, seed, 150)));
  CHECK_THROWS(toeplitz_hash(a, random_bits(10, rng), 150));
  CHECK_THROWS(toeplitz_hash(a, random_bits(2 * n, rng), n + 1));
}

TEST_CASE("PA factor and Toeplitz parameters") {
  CHECK(compute_pa_factor(20000, 20000) == 1.0);
  CHECK(compute_pa_factor(20000, 4500) == doctest::Approx(0.225));
  CHECK(compute_pa_factor(20000, -3) == 0.0);
  CHECK(compute_pa_factor(20000, 50000) == 1.0);
  CHECK_THROWS(compute_pa_factor(0, 1));

  const PASpec s = make_pa_spec(1000, 0.2257, 5);
  CHECK(s.output_len == 225);
  CHECK(s.seed.size() == 1000 + 225 - 1);
  CHECK(make_pa_spec(1000, 0.2257, 5).seed == s.seed);
  Rng rng(1);
  const BitVec x = random_bits(1000, rng);
  CHECK(toeplitz_pa(x, s) == toeplitz_naive(x, s.seed, 225));
  CHECK_THROWS(toeplitz_pa(random_bits(999, rng), s));
  CHECK(make_pa_spec(1000, 0.0, 5).output_len == 0);
}

// --------------------------------------------------------------------------
// LFSR-Toeplitz authentication

TEST_CASE("GF(2) arithmetic modulo degree-64 polynomials") {
  Rng rng(5);
  for (int t = 0; t < 2000; ++t) {
    const std::uint64_t a = rng(), b = rng(), low = rng() | 1u;
    CHECK(gf2_mulmod(a, b, low) == mulmod_reference(a, b, low));
  }
  CHECK(gf2_irreducible64(0x1B));  // x^64 + x^4 + x^3 + x + 1
  CHECK_FALSE(gf2_irreducible64(0x1A));
  CHECK_FALSE(gf2_irreducible64(0x1));
  for (int t = 0; t < 50; ++t) {
    const std::uint64_t f = rng() & 0xFFFFFFFFu, g = rng() & 0xFFFFFFFFu;
    CHECK_FALSE(gf2_irreducible64(product_low(f | 1u, g | 1u)));
  }
}

TEST_CASE("derived keys carry irreducible polynomials of full order") {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const AuthKey k = derive_auth_key(rng(), rng(), rng());
    REQUIRE(gf2_irreducible64(k.poly_low));
    // a^(2^64 - 1) = 1 in the field for any non-zero a.
    std::uint64_t a = rng() | 1u, acc = 1;
    for (int i = 0; i < 64; ++i) {
      acc = gf2_mulmod(acc, a, k.poly_low);
      a = gf2_mulmod(a, a, k.poly_low);
    }
    CHECK(acc == 1);
    CHECK(k.state != 0);
  }
}

TEST_CASE("LFSR hash equals the expanded Toeplitz matrix") {
  Rng rng(7);
  for (int t = 0; t < 60; ++t) {
    const AuthKey k = derive_auth_key(rng(), rng(), rng());
    const BitVec msg = random_bits(1 + rng() % 2048, rng);
    CHECK(lfsr_toeplitz_hash(msg, k) == lfsr_toeplitz_hash_naive(msg, k));
  }
  const AuthKey k = derive_auth_key(1, 2, 3);
  const BitVec seq = lfsr_sequence(k, 128);
  CHECK(seq.window(0) == k.state);
  CHECK(lfsr_toeplitz_hash(BitVec(100), k) == k.pad);
}

TEST_CASE("authentication keys are single use") {
  Rng rng(9);
  const BitVec msg = random_bits(500, rng);
  AuthKey a = derive_auth_key(11, 12, 13, 7);
  AuthKey b = a;
  const AuthTag ta = lfsr_toeplitz_auth(msg, a);
  CHECK(ta == lfsr_toeplitz_auth(msg, b));
  CHECK(ta.key_id == 7);
  CHECK_THROWS_AS(lfsr_toeplitz_auth(msg, a), AuthKeyReuse);

  AuthKey c = derive_auth_key(11, 12, 13, 7);
  CHECK(lfsr_toeplitz_verify(msg, ta, c));
  CHECK_THROWS_AS(lfsr_toeplitz_verify(msg, ta, c), AuthKeyReuse);
  AuthKey d = derive_auth_key(11, 12, 13, 7);
  BitVec forged = msg;
  forged.flip(17);
  CHECK_FALSE(lfsr_toeplitz_verify(forged, ta, d));
}

TEST_CASE("tag collisions respect the universal-hash bound") {
  Rng rng(10);
  const std::size_t len = 256;
  int collisions = 0;
  const int keys = 1000, pairs_per_key = 100;
  const int trials = keys * pairs_per_key;
  for (int t = 0; t < keys; ++t) {
    const AuthKey k = derive_auth_key(rng(), rng(), rng());
    for (int p = 0; p < pairs_per_key; ++p) {
      const BitVec a = random_bits(len, rng);
      BitVec b = random_bits(len, rng);
      if (a == b) b.flip(0);
      collisions += lfsr_toeplitz_hash(a, k) == lfsr_toeplitz_hash(b, k);
    }
  }
  const double bound = static_cast<double>(len) / std::ldexp(1.0, kTagBits - 1);
  CHECK(static_cast<double>(collisions) / trials <= 10 * bound + 1.0 / trials);
  CHECK(collisions == 0);
}

TEST_CASE("authentication key pool") {
  Rng rng(12);
  AuthKeyPool pool(random_bits(3 * kAuthKeyBits + 10, rng));
  CHECK(pool.remaining_bits() == 3 * kAuthKeyBits + 10);
  const AuthKey k0 = pool.next();
  pool.next();
  pool.next();
  CHECK(pool.consumed_bits() == 3 * kAuthKeyBits);
  CHECK_THROWS_AS(pool.next(), AuthFailure);
  CHECK(pool.accepts(k0));
  pool.replenish(random_bits(kAuthKeyBits, rng));
  CHECK(pool.epoch() == 1);
  CHECK_FALSE(pool.accepts(k0));
  const AuthKey k1 = pool.next();
  CHECK(k1.epoch == 1);
  CHECK(k1.id == 3);
}

// --------------------------------------------------------------------------
// Transcript

TEST_CASE("transcript serialization") {
  Transcript t;
  t.append(MsgType::Shuffle, PayloadWriter().u64(0x0102030405060708ULL).take());
  t.append(MsgType::Parities, PayloadWriter().bits(BitVec::from_string("1011")).take());
  const auto bytes = t.serialize();
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "CXTR");
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 2);
  CHECK(bytes[7] == 8);
  CHECK(bytes[11] == 0x08);
  CHECK(Transcript::parse(bytes) == t);

  PayloadReader r(t.messages()[1].payload);
  CHECK(r.bits().to_string() == "1011");
  CHECK(r.done());

  auto cut = bytes;
  cut.pop_back();
  CHECK_THROWS_AS(Transcript::parse(cut), TranscriptError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(Transcript::parse(bad), TranscriptError);
}

// --------------------------------------------------------------------------
// Winnow

TEST_CASE("Winnow block schedule") {
  CHECK(winnow_initial_exponent(0.025) == 4);
  CHECK(winnow_initial_exponent(0.1) == 2);
  CHECK(winnow_initial_exponent(0.001) == 8);
  CHECK(winnow_initial_exponent(0.0625) == 3);
  CHECK_THROWS(winnow_initial_exponent(0.0));
  CHECK_THROWS(winnow_initial_exponent(0.2));
  CHECK(winnow_syndrome_width(8) == 3);
  CHECK(winnow_syndrome_width(5) == 3);
  CHECK(winnow_syndrome_width(1) == 0);
  CHECK(winnow_syndrome_width(1024) == 10);
}

TEST_CASE("Hamming syndrome locates any single flip in an 8-bit block") {
  for (unsigned w = 0; w < 256; ++w) {
    BitVec b(8);
    for (int i = 0; i < 8; ++i) b.set(i, (w >> (7 - i)) & 1u);
    for (std::size_t t = 1; t < 8; ++t) {
      BitVec f = b;
      f.flip(t);
      CHECK((hamming_syndrome(b, 0, 8) ^ hamming_syndrome(f, 0, 8)) == t);
    }
  }
}

TEST_CASE("Winnow corrects every single flip of a small block") {
  Rng rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    const BitVec a = random_bits(64, rng);
    for (std::size_t pos = 0; pos < 64; ++pos) {
      BitVec b = a;
      b.flip(pos);
      WinnowOptions o;
      o.seed = 1000 * trial + pos;
      const WinnowResult r = winnow_correct(a, b, 0.0625, o);
      CHECK(r.converged);
      CHECK(r.alice.bits == r.bob.bits);
      CHECK(r.alice.ec_rounds >= 1);
    }
  }
}

TEST_CASE("Winnow on identical inputs") {
  Rng rng(14);
  const BitVec a = random_bits(10000, rng);
  const WinnowResult r = winnow_correct(a, a, 0.025);
  CHECK(r.converged);
  CHECK(r.alice.rounds == 1);
  CHECK(r.alice.ec_rounds == 0);
  CHECK(r.alice.leaked_bits == (10000 + 15) / 16);
  CHECK(r.alice.discarded_bits == 0);
  CHECK(r.alice.bits.size() == a.size());
  CHECK(r.alice.bits.popcount() == a.popcount());
  CHECK(r.alice.bits == r.bob.bits);
}

TEST_CASE("Winnow efficiency on large blocks") {
  Rng rng(15);
  for (double q : {0.005, 0.01, 0.025, 0.04}) {
    CAPTURE(q);
    const BitVec a = random_bits(500000, rng);
    const BitVec b = noisy_copy(a, q, rng);
    const double actual = static_cast<double>((a ^ b).popcount()) / a.size();
    WinnowOptions o;
    o.seed = static_cast<std::uint64_t>(q * 1e6);
    const WinnowResult r = winnow_correct(a, b, q, o);
    REQUIRE(r.converged);
    CHECK((r.alice.bits ^ r.bob.bits).popcount() == 0);
    const double eff = r.alice.leaked_bits / (a.size() * binary_entropy(actual));
    CHECK(eff >= 1.0);
    CHECK(eff <= 1.5);
    CHECK(r.alice.bits.size() + r.alice.discarded_bits == a.size());
  }
}

TEST_CASE("Winnow replay from the transcript") {
  Rng rng(16);
  const BitVec a = random_bits(20000, rng);
  const BitVec b = noisy_copy(a, 0.03, rng);
  WinnowOptions o;
  o.seed = 3;
  const WinnowResult r = winnow_correct(a, b, 0.03, o);
  const CorrectedBlock replay = winnow_replay(b, r.transcript);
  CHECK(replay.bits == r.bob.bits);
  CHECK(replay.leaked_bits == r.alice.leaked_bits);
  CHECK(replay.discarded_bits == r.alice.discarded_bits);
  CHECK(replay.rounds == r.alice.rounds);

  const auto& msgs = r.transcript.messages();
  Transcript tampered;
  bool done = false;
  for (const auto& m : msgs) {
    auto payload = m.payload;
    if (!done && m.type == MsgType::Mismatch) {
      payload.back() ^= 0x80;
      done = true;
    }
    tampered.append(m.type, payload);
  }
  CHECK_THROWS_AS(winnow_replay(b, tampered), TranscriptError);
  CHECK_THROWS_AS(winnow_replay(random_bits(19999, rng), r.transcript), TranscriptError);
}

TEST_CASE("Winnow reports non-convergence at the round cap") {
  Rng rng(17);
  const BitVec a = random_bits(5000, rng);
  const BitVec b = noisy_copy(a, 0.05, rng);
  WinnowOptions o;
  o.max_rounds = 1;
  CHECK_FALSE(winnow_correct(a, b, 0.05, o).converged);
  CHECK_THROWS(winnow_correct(a, random_bits(10, rng), 0.05));
}

// --------------------------------------------------------------------------
// Randomness tests

TEST_CASE("randomness tests against worked examples") {
  const auto mono = monobit_test(BitVec::from_string("1011010101"));
  CHECK(mono.p_value == doctest::Approx(0.527089).epsilon(1e-5));
  const auto runs = runs_test(BitVec::from_string("1001101011"));
  CHECK(runs.statistic == 7);
  CHECK(runs.p_value == doctest::Approx(0.147232).epsilon(1e-5));

  CHECK_FALSE(monobit_test(BitVec(10000)).pass);
  BitVec alt(10000);
  for (std::size_t i = 0; i < alt.size(); i += 2) alt.set(i, true);
  CHECK(monobit_test(alt).pass);
  CHECK_FALSE(runs_test(alt).pass);
  Rng rng(18);
  const BitVec r = random_bits(100000, rng);
  CHECK(monobit_test(r).pass);
  CHECK(runs_test(r).pass);
}

// --------------------------------------------------------------------------
// Distillation pipeline

namespace {

SimConfig field_config(const char* fiber, Direction d) {
  CoexistenceScenario s = make_scenario(fiber, d, 21);
  s.srs.model = SrsModel::Physical;
  return sim_config(s);
}

}  // namespace

TEST_CASE("distillation of 2.5% QBER field blocks") {
  const SimConfig cfg = field_config("G652-1", Direction::Co);
  DistillSession session(cfg.protocol, 42);
  std::uint64_t auth_bits = 0;
  for (std::uint64_t b = 0; b < 3; ++b) {
    const SiftedBlock block = simulate_block(cfg, 500 + b, 500'000);
    const DistillResult r = session.process(block);
    const DistillLedger& l = r.ledger;
    REQUIRE(l.status == BlockStatus::Ok);
    CHECK(l.qber == doctest::Approx(0.025).epsilon(0.1));
    CHECK(r.alice_key == r.bob_key);
    CHECK(r.alice_key.size() == l.final_bits);
    CHECK(l.verified);
    CHECK(l.pa_factor > 0.0);
    CHECK(l.pa_factor < 1.0);
    const std::uint64_t corrected = l.key_bits_in - l.discarded_bits;
    CHECK(l.final_bits + l.refill_bits ==
          static_cast<std::uint64_t>(std::floor(l.pa_factor * static_cast<double>(corrected))));
    CHECK(l.leaked_bits >= l.discarded_bits);
    const double eff = l.leaked_bits / (l.key_bits_in * binary_entropy(l.qber));
    CHECK(eff >= 1.0);
    CHECK(eff <= 1.5);
    auth_bits += l.auth_key_bits;
  }
  CHECK(session.alice_pool().consumed_bits() == auth_bits);
  CHECK(auth_bits == 3 * kAuthKeyBits);
}

TEST_CASE("noiseless blocks distill with a large PA factor") {
  SimConfig cfg = field_config("G654-110-1", Direction::Co);
  cfg.noise = {};
  cfg.protocol.e_d = 0.0;
  cfg.detector.afterpulse_prob = 0.0;
  DistillSession session(cfg.protocol, 1);
  const DistillResult r = session.process(simulate_block(cfg, 1, 500'000));
  REQUIRE(r.ledger.status == BlockStatus::Ok);
  CHECK(r.ledger.qber == 0.0);
  CHECK(r.alice_key == r.bob_key);
  // Asymptotic ceiling: single-photon share of signal clicks, mu e^-mu Y1 / Q_mu.
  const double eta = std::pow(10.0, -cfg.link_loss_db / 10.0) * cfg.detector.efficiency;
  const double ceiling = 0.6 * std::exp(-0.6) * eta / (1 - std::exp(-0.6 * eta));
  CHECK(r.ledger.pa_factor <= ceiling);
  CHECK(r.ledger.pa_factor >= 0.8 * ceiling);
}

TEST_CASE("distillation refuses blocks above the QBER cap") {
  const SimConfig cfg = field_config("G652-2", Direction::Counter);
  DistillSession session(cfg.protocol, 2);
  const DistillResult r = session.process(simulate_block(cfg, 3, 500'000));
  CHECK(r.ledger.qber > 0.04);
  CHECK(r.ledger.status == BlockStatus::QberCap);
  CHECK(r.alice_key.empty());
  CHECK(r.ledger.final_bits == 0);
}

TEST_CASE("distillation reports short blocks") {
  const SimConfig cfg = field_config("G652-1", Direction::Co);
  DistillSession session(cfg.protocol, 2);
  const DistillResult r = session.process(simulate_block(cfg, 3, 1000));
  CHECK(r.ledger.status == BlockStatus::Insufficient);
  CHECK(r.alice_key.empty());
}

TEST_CASE("a tampered transcript aborts the session") {
  const SimConfig cfg = field_config("G654-110-1", Direction::Co);
  DistillOptions opt;
  opt.channel = [](std::vector<std::uint8_t>& bytes) { bytes[bytes.size() / 2] ^= 1; };
  DistillSession session(cfg.protocol, 3, opt);
  CHECK_THROWS_AS(session.process(simulate_block(cfg, 4, 500'000)), AuthFailure);
}

TEST_CASE("auth pools are refilled from final key") {
  const SimConfig cfg = field_config("G654-110-1", Direction::Co);
  DistillOptions opt;
  opt.auth_refill_keys = 2;
  DistillSession session(cfg.protocol, 4, opt);
  std::uint64_t refilled = 0;
  for (int b = 0; b < 3; ++b) {
    const DistillResult r = session.process(simulate_block(cfg, 40 + b, 500'000));
    REQUIRE(r.ledger.status == BlockStatus::Ok);
    refilled += r.ledger.refill_bits;
  }
  CHECK(refilled == 2 * kAuthKeyBits);
  CHECK(session.alice_pool().epoch() == 1);
  CHECK(session.bob_pool().epoch() == 1);
}

TEST_CASE("ledger CSV") {
  DistillLedger l;
  l.block = 3;
  l.qber = 0.025;
  l.status = BlockStatus::QberCap;
  const std::string row = ledger_csv_row(l);
  CHECK(row.rfind("3,0.025000,", 0) == 0);
  CHECK(row.substr(row.size() - 8) == "qber_cap");
  const std::string header = ledger_csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}
