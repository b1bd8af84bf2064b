#include "coex/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>

#include "coex/parallel.hpp"

namespace coex {

std::string to_string(Cause c) {
  switch (c) {
    case Cause::Signal: return "signal";
    case Cause::Dark: return "dark";
    case Cause::Srs: return "srs";
    case Cause::Afterpulse: return "afterpulse";
    case Cause::Crosstalk: return "crosstalk";
  }
  return "unknown";
}

SimConfig sim_config(const CoexistenceScenario& s) {
  SimConfig cfg;
  cfg.link_loss_db = link_loss(s.fiber, s.mux, s.filter, 1310.0);
  const double n_mu = expected_signal_rate(cfg.link_loss_db, s.protocol, s.detector);
  cfg.noise = noise_budget(s, apply_dead_time(n_mu, s.detector));
  cfg.detector = s.detector;
  cfg.protocol = s.protocol;
  return cfg;
}

std::array<double, 3> signal_click_probs(const SimConfig& cfg) {
  const double t = std::pow(10.0, -cfg.link_loss_db / 10.0) * cfg.detector.efficiency;
  std::array<double, 3> p{};
  for (int i = 0; i < 3; ++i) p[i] = -std::expm1(-cfg.protocol.intensity(i) * t);
  return p;
}

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

IntensityClass draw_class(double u, const std::array<double, 3>& probs) {
  if (u < probs[0]) return IntensityClass::Signal;
  if (u < probs[0] + probs[1]) return IntensityClass::Decoy;
  return IntensityClass::Vacuum;
}

std::uint64_t dead_slots(const DetectorSpec& det, const DecoyParams& p) {
  return static_cast<std::uint64_t>(std::llround(det.dead_time_s * p.rep_rate_hz));
}

void require_four_detectors(const DetectorSpec& det) {
  if (det.num_detectors != 4)
    throw InputError("simulation models one detector per basis and bit; detector.num_detectors must be 4");
}

double slot_probability(double rate_cps, const DecoyParams& p, const char* what) {
  const double q = rate_cps / p.rep_rate_hz;
  if (!(q >= 0.0 && q < 1.0))
    throw InputError(std::string(what) + " rate per slot must lie in [0, 1); lower the rate or shorten the slot");
  return q;
}

struct Click {
  std::uint8_t detector;
  Cause cause;
};

/// Dead-time veto, registration and afterpulse scheduling shared by both
/// simulators. Returns the number of distinct detectors that registered and
/// leaves the surviving click in `kept`.
class Receiver {
 public:
  Receiver(const DetectorSpec& det, const DecoyParams& p)
      : hold_(dead_slots(det, p)), after_prob_(det.afterpulse_prob) {}

  bool afterpulse_due(std::uint64_t slot) const {
    return !afterpulses_.empty() && afterpulses_.front().first == slot;
  }
  std::uint64_t next_afterpulse() const {
    return afterpulses_.empty() ? kNever : afterpulses_.front().first;
  }
  void pop_afterpulses(std::uint64_t slot, std::vector<Click>& clicks) {
    while (afterpulse_due(slot)) {
      clicks.push_back({afterpulses_.front().second, Cause::Afterpulse});
      afterpulses_.pop_front();
    }
  }

  int resolve(std::uint64_t slot, const std::vector<Click>& clicks, Rng& rng, Click& kept) {
    bool seen[4] = {false, false, false, false};
    int distinct = 0;
    for (const Click& c : clicks) {
      if (seen[c.detector] || slot < busy_until_[c.detector]) continue;
      seen[c.detector] = true;
      if (distinct++ == 0) kept = c;
    }
    for (std::uint8_t d = 0; d < 4; ++d) {
      if (!seen[d]) continue;
      busy_until_[d] = slot + hold_ + 1;
      if (after_prob_ > 0.0 && bernoulli(rng, after_prob_))
        afterpulses_.emplace_back(slot + hold_ + 1, d);
    }
    return distinct;
  }

  std::uint64_t hold() const { return hold_; }

 private:
  std::uint64_t hold_;
  double after_prob_;
  std::uint64_t busy_until_[4] = {0, 0, 0, 0};
  std::deque<std::pair<std::uint64_t, std::uint8_t>> afterpulses_;
};

Click signal_click(std::uint8_t alice_basis, std::uint8_t alice_bit, double e_d, Rng& rng) {
  const std::uint8_t basis_bob = rng() & 1u;
  std::uint8_t bit_bob;
  if (basis_bob == alice_basis)
    bit_bob = alice_bit ^ static_cast<std::uint8_t>(bernoulli(rng, e_d));
  else
    bit_bob = rng() & 1u;
  return {static_cast<std::uint8_t>(2 * basis_bob + bit_bob), Cause::Signal};
}

}  // namespace

std::vector<PulseRecord> emit_pulses(std::uint64_t n, const DecoyParams& protocol,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PulseRecord> out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t r = rng();
    out[i].index = i;
    out[i].basis = r & 1u;
    out[i].bit = (r >> 1) & 1u;
    out[i].cls = draw_class(uniform01(rng), protocol.emission_probs);
  }
  return out;
}

std::vector<DetectionRecord> transmit_detect(const std::vector<PulseRecord>& pulses,
                                             double link_loss_db, const NoiseBudget& noise,
                                             const DetectorSpec& det,
                                             const DecoyParams& protocol, std::uint64_t seed) {
  require_four_detectors(det);
  SimConfig cfg{link_loss_db, noise, det, protocol};
  const auto p_sig = signal_click_probs(cfg);
  const std::pair<double, Cause> sources[] = {
      {slot_probability(noise.n_dark, protocol, "dark count"), Cause::Dark},
      {slot_probability(noise.n_srs, protocol, "Raman"), Cause::Srs},
      {slot_probability(noise.n_crosstalk, protocol, "crosstalk"), Cause::Crosstalk},
  };

  Rng rng(seed);
  Receiver rx(det, protocol);
  std::vector<DetectionRecord> out;
  std::vector<Click> clicks;
  for (const PulseRecord& pulse : pulses) {
    clicks.clear();
    if (bernoulli(rng, p_sig[static_cast<int>(pulse.cls)]))
      clicks.push_back(signal_click(pulse.basis, pulse.bit, protocol.e_d, rng));
    for (const auto& [p, cause] : sources)
      if (p > 0.0 && bernoulli(rng, p)) clicks.push_back({static_cast<std::uint8_t>(rng() & 3u), cause});
    rx.pop_afterpulses(pulse.index, clicks);
    if (clicks.empty()) continue;
    Click kept{};
    if (rx.resolve(pulse.index, clicks, rng, kept) == 1)
      out.push_back({pulse.index, kept.detector, kept.cause,
                     static_cast<std::uint8_t>(kept.detector >> 1)});
  }
  return out;
}

double SiftedBlock::measured_qber() const {
  if (alice.empty()) return 0.0;
  return static_cast<double>((alice ^ bob).popcount()) / static_cast<double>(alice.size());
}

namespace {

void record_sifted(SiftedBlock& b, std::uint64_t slot, IntensityClass cls, std::uint8_t alice_bit,
                   std::uint8_t bob_bit, Cause cause) {
  const int c = static_cast<int>(cls);
  b.alice.push_back(alice_bit);
  b.bob.push_back(bob_bit);
  b.positions.push_back(slot);
  b.classes.push_back(cls);
  b.tallies[c].sifted += 1;
  const bool err = alice_bit != bob_bit;
  if (err) b.tallies[c].errors += 1;
  if (cause == Cause::Signal) {
    ++b.signal_sifted[c];
    if (err) ++b.signal_errors[c];
  }
}

}  // namespace

SiftedBlock sift(const std::vector<PulseRecord>& pulses,
                 const std::vector<DetectionRecord>& detections) {
  SiftedBlock b;
  b.slots = pulses.size();
  for (const auto& p : pulses) b.tallies[static_cast<int>(p.cls)].sent += 1;
  if (pulses.empty()) return b;
  const std::uint64_t first = pulses.front().index;
  for (const auto& d : detections) {
    const std::uint64_t k = d.index - first;
    if (d.index < first || k >= pulses.size() || pulses[k].index != d.index)
      throw std::invalid_argument("detection does not align with a pulse slot");
    const PulseRecord& p = pulses[k];
    b.tallies[static_cast<int>(p.cls)].detected += 1;
    if (d.basis_bob == p.basis) record_sifted(b, d.index, p.cls, p.bit, d.bit_bob(), d.cause);
  }
  return b;
}

KeyPair key_bits(const SiftedBlock& block) {
  KeyPair k;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (block.classes[i] != IntensityClass::Signal) continue;
    k.alice.push_back(block.alice.get(i));
    k.bob.push_back(block.bob.get(i));
  }
  return k;
}

PartitionResult simulate_partition(const SimConfig& cfg, std::uint64_t seed,
                                   std::uint64_t partition) {
  require_four_detectors(cfg.detector);
  const DecoyParams& proto = cfg.protocol;
  const auto p_sig = signal_click_probs(cfg);
  const double p_max = *std::max_element(p_sig.begin(), p_sig.end());

  const double rates[3] = {cfg.noise.n_dark, cfg.noise.n_srs, cfg.noise.n_crosstalk};
  const Cause causes[3] = {Cause::Dark, Cause::Srs, Cause::Crosstalk};
  const double noise_rate = rates[0] + rates[1] + rates[2];
  const double p_noise = -std::expm1(-slot_probability(noise_rate, proto, "total noise"));

  // Class of a slot known to hold no signal click.
  std::array<double, 3> idle{};
  double idle_sum = 0.0;
  for (int i = 0; i < 3; ++i) idle_sum += proto.emission_probs[i] * (1.0 - p_sig[i]);
  for (int i = 0; i < 3; ++i) idle[i] = proto.emission_probs[i] * (1.0 - p_sig[i]) / idle_sum;

  Rng rng(derive_seed(seed, partition));
  Receiver rx(cfg.detector, proto);
  const std::uint64_t begin = partition * kPartitionSlots;
  const std::uint64_t end = begin + kPartitionSlots;
  const std::uint64_t warmup = rx.hold() + 1;
  const std::uint64_t start = begin >= warmup ? begin - warmup : 0;

  auto next_after = [&](double p, std::uint64_t from) {
    return p > 0.0 ? from + geometric(rng, p) : kNever;
  };
  std::uint64_t next_sig = next_after(p_max, start);
  std::uint64_t next_noise = next_after(p_noise, start);

  PartitionResult out;
  std::array<std::uint64_t, 3> clicked{};
  std::vector<Click> clicks;
  for (;;) {
    const std::uint64_t s = std::min({next_sig, next_noise, rx.next_afterpulse()});
    if (s >= end) break;
    clicks.clear();
    bool have_class = false;
    IntensityClass cls = IntensityClass::Signal;
    std::uint8_t a_basis = 0, a_bit = 0;

    if (s == next_sig) {
      const IntensityClass c = draw_class(uniform01(rng), proto.emission_probs);
      if (bernoulli(rng, p_sig[static_cast<int>(c)] / p_max)) {
        const std::uint64_t r = rng();
        a_basis = r & 1u;
        a_bit = (r >> 1) & 1u;
        cls = c;
        have_class = true;
        clicks.push_back(signal_click(a_basis, a_bit, proto.e_d, rng));
      }
      next_sig = next_after(p_max, s + 1);
    }
    if (s == next_noise) {
      double u = uniform01(rng) * noise_rate;
      int src = 0;
      while (src < 2 && u >= rates[src]) u -= rates[src++];
      clicks.push_back({static_cast<std::uint8_t>(rng() & 3u), causes[src]});
      next_noise = next_after(p_noise, s + 1);
    }
    rx.pop_afterpulses(s, clicks);
    if (clicks.empty()) continue;

    Click kept{};
    if (rx.resolve(s, clicks, rng, kept) != 1 || s < begin) continue;
    if (!have_class) {
      cls = draw_class(uniform01(rng), idle);
      const std::uint64_t r = rng();
      a_basis = r & 1u;
      a_bit = (r >> 1) & 1u;
    }
    out.clicks.push_back({s, cls, a_basis, a_bit, kept.detector, kept.cause});
    ++clicked[static_cast<int>(cls)];
  }

  std::uint64_t rest = kPartitionSlots - out.clicks.size();
  std::binomial_distribution<std::uint64_t> b0(rest, idle[0]);
  const std::uint64_t n0 = b0(rng);
  rest -= n0;
  const double q1 = idle[1] / (idle[1] + idle[2]);
  std::binomial_distribution<std::uint64_t> b1(rest, std::clamp(q1, 0.0, 1.0));
  const std::uint64_t n1 = b1(rng);
  out.sent = {clicked[0] + n0, clicked[1] + n1, clicked[2] + rest - n1};
  return out;
}

namespace {

std::uint64_t sifted_in(const PartitionResult& r) {
  std::uint64_t n = 0;
  for (const auto& c : r.clicks) n += c.alice_basis == (c.detector >> 1);
  return n;
}

SiftedBlock assemble(const std::vector<PartitionResult>& parts, std::size_t count) {
  SiftedBlock b;
  b.slots = count * kPartitionSlots;
  for (std::size_t k = 0; k < count; ++k) {
    const PartitionResult& part = parts[k];
    for (int c = 0; c < 3; ++c) b.tallies[c].sent += static_cast<double>(part.sent[c]);
    for (const SimulatedSlot& s : part.clicks) {
      b.tallies[static_cast<int>(s.cls)].detected += 1;
      if (s.alice_basis == (s.detector >> 1))
        record_sifted(b, s.slot, s.cls, s.alice_bit, s.detector & 1u, s.cause);
    }
  }
  return b;
}

constexpr std::uint64_t kMaxPartitions = std::uint64_t{1} << 16;

double expected_sifted_per_partition(const SimConfig& cfg) {
  const auto p = signal_click_probs(cfg);
  double q = (cfg.noise.n_dark + cfg.noise.n_srs + cfg.noise.n_crosstalk) / cfg.protocol.rep_rate_hz;
  for (int i = 0; i < 3; ++i) q += cfg.protocol.emission_probs[i] * p[i];
  return q * cfg.protocol.sift_factor * static_cast<double>(kPartitionSlots);
}

[[noreturn]] void no_detections() {
  throw InputError("channel produced too few detections to fill a block");
}

}  // namespace

SiftedBlock simulate_block_serial(const SimConfig& cfg, std::uint64_t seed,
                                  std::uint64_t min_sifted) {
  std::vector<PartitionResult> parts;
  std::uint64_t sifted = 0;
  while (sifted < min_sifted || parts.empty()) {
    if (parts.size() >= kMaxPartitions) no_detections();
    parts.push_back(simulate_partition(cfg, seed, parts.size()));
    sifted += sifted_in(parts.back());
  }
  return assemble(parts, parts.size());
}

SiftedBlock simulate_block(const SimConfig& cfg, std::uint64_t seed, std::uint64_t min_sifted) {
  const double per_part = std::max(1.0, expected_sifted_per_partition(cfg));
  std::vector<PartitionResult> parts;
  std::uint64_t sifted = 0;
  std::size_t used = 0;
  while (used == 0 || sifted < min_sifted) {
    // Consume results already computed before launching more.
    while (used < parts.size() && (used == 0 || sifted < min_sifted)) sifted += sifted_in(parts[used++]);
    if (used > 0 && sifted >= min_sifted) break;
    if (parts.size() >= kMaxPartitions) no_detections();
    const double missing = static_cast<double>(min_sifted - std::min(sifted, min_sifted));
    std::size_t batch = static_cast<std::size_t>(std::ceil(missing / per_part * 1.02));
    batch = std::clamp<std::size_t>(batch, 1, kMaxPartitions - parts.size());
    const std::size_t first = parts.size();
    parts.resize(first + batch);
    parallel_for(static_cast<std::ptrdiff_t>(batch), [&](std::ptrdiff_t i) {
      parts[first + i] = simulate_partition(cfg, seed, first + i);
    });
  }
  return assemble(parts, used);
}

Tallies sample_tallies(const ChannelStats& stats, const DecoyParams& protocol, Rng& rng) {
  const Tallies expected = expected_tallies(stats, protocol);
  Tallies t{};
  for (int c = 0; c < 3; ++c) {
    const auto sent = static_cast<std::uint64_t>(std::llround(expected[c].sent));
    std::binomial_distribution<std::uint64_t> det(sent, std::clamp(stats.gain[c], 0.0, 1.0));
    const std::uint64_t d = det(rng);
    std::binomial_distribution<std::uint64_t> sif(d, protocol.sift_factor);
    const std::uint64_t s = sif(rng);
    std::binomial_distribution<std::uint64_t> err(s, std::clamp(stats.error[c], 0.0, 1.0));
    t[c] = {static_cast<double>(sent), static_cast<double>(d), static_cast<double>(s),
            static_cast<double>(err(rng))};
  }
  return t;
}

// ---------------------------------------------------------------------------
// Block dump

namespace {

void put_u16(std::ostream& o, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  o.write(b, 2);
}

void put_u64(std::ostream& o, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  o.write(b, 8);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  if (!in.read(reinterpret_cast<char*>(b), bytes)) throw InputError("block dump truncated");
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

constexpr std::uint16_t kDumpVersion = 1;

}  // namespace

void write_block_dump(std::ostream& out, const SiftedBlock& block, std::uint64_t scenario_hash) {
  out.write("CXBK", 4);
  put_u16(out, kDumpVersion);
  put_u64(out, scenario_hash);
  put_u64(out, block.size());
  for (const auto& t : block.tallies)
    for (double v : {t.sent, t.detected, t.sifted, t.errors})
      put_u64(out, static_cast<std::uint64_t>(std::llround(v)));
  const auto a = block.alice.to_bytes();
  const auto b = block.bob.to_bytes();
  out.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size()));
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

BlockDump read_block_dump(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "CXBK") throw InputError("not a block dump");
  if (get_le(in, 2) != kDumpVersion) throw InputError("unsupported block dump version");
  BlockDump d;
  d.scenario_hash = get_le(in, 8);
  const std::uint64_t n = get_le(in, 8);
  for (auto& t : d.tallies) {
    t.sent = static_cast<double>(get_le(in, 8));
    t.detected = static_cast<double>(get_le(in, 8));
    t.sifted = static_cast<double>(get_le(in, 8));
    t.errors = static_cast<double>(get_le(in, 8));
  }
  const std::size_t nbytes = (n + 7) / 8;
  auto read_bits = [&] {
    std::vector<std::uint8_t> buf(nbytes);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(nbytes)))
      throw InputError("block dump truncated");
    return BitVec::from_bytes(buf, n);
  };
  d.alice = read_bits();
  d.bob = read_bits();
  return d;
}

}  // namespace coex
