#include "coex/winnow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "coex/rng.hpp"

namespace coex {

int winnow_initial_exponent(double qber_hint) {
  if (!(qber_hint > 0.0 && qber_hint <= 0.1))
    throw std::invalid_argument("qber_hint must lie in (0, 0.1]");
  return std::max(1, static_cast<int>(std::floor(std::log2(0.5 / qber_hint))));
}

int winnow_syndrome_width(std::size_t len) {
  int w = 0;
  while ((std::size_t{1} << w) < len) ++w;
  return w;
}

std::uint64_t hamming_syndrome(const BitVec& bits, std::size_t begin, std::size_t len) {
  std::uint64_t s = 0;
  for (std::size_t t = 1; t < len; ++t)
    if (bits.get(begin + t)) s ^= t;
  return s;
}

namespace {

constexpr int kMaxExponent = 40;

std::vector<std::uint32_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(p[i - 1], p[std::min(j, i - 1)]);
  }
  return p;
}

BitVec apply_permutation(const BitVec& in, const std::vector<std::uint32_t>& p) {
  BitVec out(in.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (in.get(p[i])) out.set(i, true);
  return out;
}

std::size_t block_count(std::size_t n, std::size_t b) { return (n + b - 1) / b; }

BitVec parities(const BitVec& bits, std::size_t b) {
  const std::size_t nb = block_count(bits.size(), b);
  BitVec out(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const std::size_t end = std::min(bits.size(), (k + 1) * b);
    bool p = false;
    for (std::size_t i = k * b; i < end; ++i) p ^= bits.get(i);
    out.set(k, p);
  }
  return out;
}

std::size_t block_len(std::size_t n, std::size_t b, std::size_t k) {
  return std::min(n, (k + 1) * b) - k * b;
}

BitVec syndromes(const BitVec& bits, std::size_t b, const BitVec& flags) {
  BitVec out;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (!flags.get(k)) continue;
    const std::size_t len = block_len(bits.size(), b, k);
    const int w = winnow_syndrome_width(len);
    const std::uint64_t s = hamming_syndrome(bits, k * b, len);
    for (int j = w - 1; j >= 0; --j) out.push_back((s >> j) & 1u);
  }
  return out;
}

void correct(BitVec& bits, std::size_t b, const BitVec& flags, const BitVec& alice_syn) {
  std::size_t pos = 0;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (!flags.get(k)) continue;
    const std::size_t len = block_len(bits.size(), b, k);
    const int w = winnow_syndrome_width(len);
    if (pos + static_cast<std::size_t>(w) > alice_syn.size())
      throw TranscriptError("syndrome message too short");
    std::uint64_t s = 0;
    for (int j = 0; j < w; ++j) s = (s << 1) | alice_syn.get(pos++);
    const std::uint64_t diff = s ^ hamming_syndrome(bits, k * b, len);
    if (diff < len) bits.flip(k * b + diff);
  }
  if (pos != alice_syn.size()) throw TranscriptError("syndrome message too long");
}

/// Drops in-block position 0 of every block and positions 1, 2, 4, ... of
/// flagged blocks.
BitVec discard(const BitVec& bits, std::size_t b, const BitVec& flags, std::uint64_t& dropped) {
  BitVec out;
  const std::size_t n = bits.size();
  for (std::size_t k = 0; k < flags.size(); ++k) {
    const std::size_t len = block_len(n, b, k);
    const bool flagged = flags.get(k);
    for (std::size_t t = 0; t < len; ++t) {
      const bool power_of_two = t != 0 && (t & (t - 1)) == 0;
      if (t == 0 || (flagged && power_of_two)) {
        ++dropped;
        continue;
      }
      out.push_back(bits.get(k * b + t));
    }
  }
  return out;
}

std::vector<std::uint8_t> start_payload(std::size_t n, int k0, int max_rounds) {
  return PayloadWriter()
      .u32(static_cast<std::uint32_t>(n))
      .u8(static_cast<std::uint8_t>(k0))
      .u8(static_cast<std::uint8_t>(max_rounds))
      .take();
}

}  // namespace

WinnowResult winnow_correct(const BitVec& alice, const BitVec& bob, double qber_hint,
                            const WinnowOptions& options) {
  if (alice.size() != bob.size()) throw std::invalid_argument("winnow inputs differ in length");
  if (options.max_rounds < 1) throw std::invalid_argument("winnow needs max_rounds >= 1");
  const int k0 = winnow_initial_exponent(qber_hint);

  WinnowResult res;
  Transcript& tr = res.transcript;
  tr.append(MsgType::WinnowStart, start_payload(alice.size(), k0, options.max_rounds));

  BitVec a = alice, b = bob;
  std::uint64_t leaked = 0, dropped = 0;
  int ec_rounds = 0, rounds = 0;
  for (int r = 0; r < options.max_rounds; ++r) {
    if (a.empty()) {
      res.converged = true;
      break;
    }
    const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(r));
    tr.append(MsgType::Shuffle, PayloadWriter().u64(seed).take());
    const auto perm = permutation(a.size(), seed);
    a = apply_permutation(a, perm);
    b = apply_permutation(b, perm);

    const std::size_t bs = std::size_t{1} << std::min(k0 + r, kMaxExponent);
    const BitVec pa = parities(a, bs);
    tr.append(MsgType::Parities, PayloadWriter().bits(pa).take());
    const BitVec flags = pa ^ parities(b, bs);
    tr.append(MsgType::Mismatch, PayloadWriter().bits(flags).take());
    leaked += pa.size();
    ++rounds;
    if (flags.popcount() == 0) {
      res.converged = true;
      break;
    }
    const BitVec syn = syndromes(a, bs, flags);
    tr.append(MsgType::Syndromes, PayloadWriter().bits(syn).take());
    leaked += syn.size();
    correct(b, bs, flags, syn);
    std::uint64_t dropped_b = 0;
    a = discard(a, bs, flags, dropped);
    b = discard(b, bs, flags, dropped_b);
    ++ec_rounds;
  }
  tr.append(MsgType::WinnowEnd,
            PayloadWriter().u8(res.converged).u8(static_cast<std::uint8_t>(rounds)).take());

  for (CorrectedBlock* side : {&res.alice, &res.bob}) {
    side->leaked_bits = leaked;
    side->discarded_bits = dropped;
    side->ec_rounds = ec_rounds;
    side->rounds = rounds;
  }
  res.alice.bits = std::move(a);
  res.bob.bits = std::move(b);
  return res;
}

CorrectedBlock winnow_replay(const BitVec& bob, const Transcript& transcript) {
  const auto& msgs = transcript.messages();
  std::size_t i = 0;
  auto next = [&](MsgType want) -> const Message& {
    while (i < msgs.size() && (msgs[i].type != want)) {
      if (msgs[i].type >= MsgType::WinnowStart && msgs[i].type <= MsgType::WinnowEnd)
        throw TranscriptError("unexpected Winnow message order");
      ++i;
    }
    if (i == msgs.size()) throw TranscriptError("transcript ends inside Winnow");
    return msgs[i++];
  };

  PayloadReader start(next(MsgType::WinnowStart).payload);
  const std::uint32_t n = start.u32();
  const int k0 = start.u8();
  start.u8();
  if (n != bob.size()) throw TranscriptError("transcript block length differs from Bob's bits");

  CorrectedBlock out;
  BitVec b = bob;
  for (int r = 0;; ++r) {
    if (i < msgs.size() && msgs[i].type == MsgType::WinnowEnd) break;
    PayloadReader sh(next(MsgType::Shuffle).payload);
    b = apply_permutation(b, permutation(b.size(), sh.u64()));
    const std::size_t bs = std::size_t{1} << std::min(k0 + r, kMaxExponent);
    PayloadReader pr(next(MsgType::Parities).payload);
    const BitVec pa = pr.bits();
    const BitVec pb = parities(b, bs);
    if (pa.size() != pb.size()) throw TranscriptError("parity count mismatch");
    const BitVec flags = pa ^ pb;
    PayloadReader mr(next(MsgType::Mismatch).payload);
    if (!(mr.bits() == flags)) throw TranscriptError("mismatch flags disagree with Bob's parities");
    out.leaked_bits += pa.size();
    ++out.rounds;
    if (flags.popcount() == 0) continue;
    PayloadReader sr(next(MsgType::Syndromes).payload);
    const BitVec syn = sr.bits();
    out.leaked_bits += syn.size();
    correct(b, bs, flags, syn);
    b = discard(b, bs, flags, out.discarded_bits);
    ++out.ec_rounds;
  }
  PayloadReader end(next(MsgType::WinnowEnd).payload);
  end.u8();
  if (end.u8() != out.rounds) throw TranscriptError("round count disagrees with transcript");
  out.bits = std::move(b);
  return out;
}

}  // namespace coex
