#include "relaysim/protocol.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace relaysim {

namespace {

// Per-slot substream tags; link draws hang off kTagChannels.
constexpr std::uint64_t kTagChannels = 1;
constexpr std::uint64_t kTagNoise = 2;
constexpr std::uint64_t kTagBits = 3;

}  // namespace

void RelayBuffer::push(Packet p) {
  if (size() >= capacity_) throw std::logic_error("relay buffer overflow");
  queue_.push_back(std::move(p));
}

Packet RelayBuffer::pop() {
  if (queue_.empty()) throw std::logic_error("relay buffer underflow");
  Packet p = std::move(queue_.front());
  queue_.pop_front();
  return p;
}

void RunParams::validate() const {
  if (n < 1) throw ConfigError("need at least one relay");
  if (m < 1) throw ConfigError("need at least one antenna");
  if (j < 2 * m)
    throw ConfigError("buffer size j must be >= 2*m so some relay can always act");
  if ((j / 2) % m != 0)
    throw ConfigError("floor(j/2) must be a multiple of m: packets move in batches of m");
  if (es <= 0.0) throw ConfigError("symbol energy must be positive");
  if (n0 <= 0.0) throw ConfigError("noise level must be positive");
  if (symbols_per_packet < 1) throw ConfigError("symbols_per_packet must be >= 1");
  if (!csi.perfect) CsiModel::make_imperfect(csi.beta, csi.alpha);  // range check
}

ProtocolRun::ProtocolRun(const RunParams& params, StreamKey run_key)
    : params_(params),
      run_key_(run_key),
      constellation_(build_constellation(params.constellation)),
      candidates_(enumerate_candidates(constellation_, params.m)),
      diffs_(enumerate_difference_vectors(build_difference_set(constellation_),
                                          params.m)) {
  params_.validate();
  buffers_.assign(params_.n, RelayBuffer(params_.j));
}

Packet ProtocolRun::make_packet(Rng& bits_rng, std::uint64_t slot) {
  Packet p;
  p.id = next_packet_id_++;
  p.origin_slot = slot;
  p.source_bits.resize(static_cast<std::size_t>(params_.symbols_per_packet) *
                       constellation_.bits_per_symbol);
  for (auto& b : p.source_bits) b = static_cast<std::uint8_t>(bits_rng.next_bit());
  return p;
}

std::vector<Packet> ProtocolRun::make_batch(Rng& bits_rng, std::uint64_t slot) {
  std::vector<Packet> batch;
  batch.reserve(params_.m);
  for (int a = 0; a < params_.m; ++a) batch.push_back(make_packet(bits_rng, slot));
  return batch;
}

std::vector<std::vector<std::uint8_t>> ProtocolRun::transmit_batch(
    const std::vector<Packet>& batch, bool from_relay_bits,
    const LinkEstimate& link, double gain, Rng& noise_rng) {
  const int m = params_.m;
  const int bps = constellation_.bits_per_symbol;
  const MlDetector detector(link.estimated_h, gain, candidates_);

  std::vector<std::vector<std::uint8_t>> decoded(m);
  for (auto& d : decoded)
    d.reserve(static_cast<std::size_t>(params_.symbols_per_packet) * bps);

  std::vector<cdouble> x(m);
  std::vector<cdouble> y(m);
  for (int u = 0; u < params_.symbols_per_packet; ++u) {
    for (int a = 0; a < m; ++a) {
      const auto& bits = from_relay_bits ? batch[a].relay_bits : batch[a].source_bits;
      const int label = bits_to_index(
          {bits.data() + static_cast<std::size_t>(u) * bps,
           static_cast<std::size_t>(bps)});
      x[a] = constellation_.symbols[label];
    }
    link.true_h.mul(x, y);
    for (int a = 0; a < m; ++a)
      y[a] = gain * y[a] + noise_rng.next_cgaussian(params_.n0);
    const DetectionResult r = detector.detect(y);
    for (int a = 0; a < m; ++a) {
      std::uint8_t bits[8];
      index_to_bits(candidates_.symbol_label(r.index, a), bps, bits);
      decoded[a].insert(decoded[a].end(), bits, bits + bps);
    }
  }
  return decoded;
}

std::vector<RelayAvailability> ProtocolRun::availability() const {
  std::vector<RelayAvailability> avail(params_.n);
  for (int i = 0; i < params_.n; ++i) {
    avail[i].can_receive = buffers_[i].free_slots() >= params_.m;
    avail[i].can_transmit = buffers_[i].size() >= params_.m;
  }
  return avail;
}

void ProtocolRun::initialize_buffers() {
  if (initialized_) throw std::logic_error("buffers already initialized");
  initialized_ = true;
  if (params_.protocol == ProtocolKind::DirectOnly) return;

  const int target = params_.j / 2;
  const double g_coop = cooperative_gain(params_.es, params_.m);
  while (true) {
    int pending = -1;
    for (int i = 0; i < params_.n; ++i)
      if (buffers_[i].size() < target) {
        pending = i;
        break;
      }
    if (pending < 0) break;

    const StreamKey slot_key = run_key_.child(slot_counter_);
    const SlotChannels channels = draw_slot_channels(
        slot_key.child(kTagChannels), params_.n, params_.m, params_.csi,
        params_.es);

    // The source feeds the relay with the best SR link set among those that
    // still need packets.
    int best = -1;
    double best_val = 0.0;
    for (int i = 0; i < params_.n; ++i) {
      if (buffers_[i].size() >= target) continue;
      const double v = params_.criterion == Criterion::Mmd
                           ? min_distance(channels.sr[i].estimated_h, diffs_, g_coop)
                           : qn_metric(channels.sr[i].estimated_h);
      if (best < 0 || v > best_val) {
        best = i;
        best_val = v;
      }
    }

    Rng bits_rng = slot_key.child(kTagBits).rng();
    Rng noise_rng = slot_key.child(kTagNoise).rng();
    std::vector<Packet> batch = make_batch(bits_rng, slot_counter_);
    auto decoded = transmit_batch(batch, /*from_relay_bits=*/false,
                                  channels.sr[best], g_coop, noise_rng);
    for (int a = 0; a < params_.m; ++a) {
      batch[a].relay_bits = std::move(decoded[a]);
      buffers_[best].push(std::move(batch[a]));
    }
    totals_.packets_created_init += params_.m;
    ++totals_.init_slots;
    ++slot_counter_;
  }
}

SlotOutcome ProtocolRun::run_slot() {
  if (!initialized_) throw std::logic_error("initialize_buffers() must run first");

  const StreamKey slot_key = run_key_.child(slot_counter_);
  const SlotChannels channels = draw_slot_channels(
      slot_key.child(kTagChannels), params_.n, params_.m, params_.csi,
      params_.es);
  const auto avail = availability();

  SlotOutcome outcome;
  outcome.decision = decide_slot(channels, avail, params_.criterion,
                                 params_.protocol, params_.es, diffs_);

  Rng bits_rng = slot_key.child(kTagBits).rng();
  Rng noise_rng = slot_key.child(kTagNoise).rng();
  const double g_coop = cooperative_gain(params_.es, params_.m);
  const double g_direct = direct_gain(params_.es, params_.m);

  switch (outcome.decision.mode) {
    case Mode::Direct: {
      std::vector<Packet> batch = make_batch(bits_rng, slot_counter_);
      auto decoded = transmit_batch(batch, /*from_relay_bits=*/false,
                                    channels.sd, g_direct, noise_rng);
      for (int a = 0; a < params_.m; ++a) {
        for (std::size_t i = 0; i < decoded[a].size(); ++i)
          outcome.bit_errors += decoded[a][i] != batch[a].source_bits[i];
        outcome.bits_delivered += decoded[a].size();
        outcome.delivered.emplace_back(batch[a].id, std::move(decoded[a]));
      }
      outcome.packets_created = params_.m;
      ++totals_.n_direct;
      break;
    }
    case Mode::Reception: {
      const int k = outcome.decision.relay;
      std::vector<Packet> batch = make_batch(bits_rng, slot_counter_);
      auto decoded = transmit_batch(batch, /*from_relay_bits=*/false,
                                    channels.sr[k], g_coop, noise_rng);
      for (int a = 0; a < params_.m; ++a) {
        batch[a].relay_bits = std::move(decoded[a]);
        buffers_[k].push(std::move(batch[a]));
      }
      outcome.packets_created = params_.m;
      ++totals_.n_reception;
      break;
    }
    case Mode::Transmission: {
      const int j = outcome.decision.relay;
      std::vector<Packet> batch;
      batch.reserve(params_.m);
      for (int a = 0; a < params_.m; ++a) batch.push_back(buffers_[j].pop());
      auto decoded = transmit_batch(batch, /*from_relay_bits=*/true,
                                    channels.rd[j], g_coop, noise_rng);
      for (int a = 0; a < params_.m; ++a) {
        for (std::size_t i = 0; i < decoded[a].size(); ++i)
          outcome.bit_errors += decoded[a][i] != batch[a].source_bits[i];
        outcome.bits_delivered += decoded[a].size();
        outcome.delivered.emplace_back(batch[a].id, std::move(decoded[a]));
      }
      ++totals_.n_transmission;
      break;
    }
  }

  totals_.packets_created += outcome.packets_created;
  totals_.packets_delivered += outcome.delivered.size();
  totals_.bits_delivered += outcome.bits_delivered;
  totals_.bit_errors += outcome.bit_errors;
  ++totals_.slots;
  ++slot_counter_;
  return outcome;
}

int ProtocolRun::buffered_packets() const {
  int total = 0;
  for (const RelayBuffer& b : buffers_) total += b.size();
  return total;
}

}  // namespace relaysim
