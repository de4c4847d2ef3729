#pragma once

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/constellation.hpp"
#include "relaysim/detection.hpp"
#include "relaysim/selection.hpp"

namespace relaysim {

struct Packet {
  std::uint64_t id = 0;
  std::uint64_t origin_slot = 0;
  std::vector<std::uint8_t> source_bits;
  std::vector<std::uint8_t> relay_bits;  // relay's decode-and-forward decision
};

/// FIFO packet buffer of fixed capacity.
class RelayBuffer {
 public:
  explicit RelayBuffer(int capacity) : capacity_(capacity) {}

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(queue_.size()); }
  int free_slots() const { return capacity_ - size(); }

  void push(Packet p);
  Packet pop();

  const Packet& peek(int i) const { return queue_[i]; }
  Packet& peek(int i) { return queue_[i]; }

 private:
  std::deque<Packet> queue_;
  int capacity_;
};

struct RunParams {
  int n = 3;
  int m = 2;
  int j = 4;
  ConstellationKind constellation = ConstellationKind::Bpsk;
  Criterion criterion = Criterion::Mmd;
  ProtocolKind protocol = ProtocolKind::SwitchedMaxLink;
  CsiModel csi;
  double es = 1.0;
  double n0 = 1.0;
  int symbols_per_packet = 100;

  void validate() const;
};

struct SlotOutcome {
  SlotDecision decision;
  std::vector<std::pair<std::uint64_t, std::vector<std::uint8_t>>> delivered;
  std::uint64_t bits_delivered = 0;
  std::uint64_t bit_errors = 0;
  int packets_created = 0;
};

struct RunTotals {
  std::uint64_t slots = 0;  // measurement slots, not counting initialization
  std::uint64_t init_slots = 0;
  std::uint64_t n_direct = 0;
  std::uint64_t n_reception = 0;
  std::uint64_t n_transmission = 0;
  std::uint64_t packets_created = 0;  // after initialization
  std::uint64_t packets_created_init = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t bits_delivered = 0;
  std::uint64_t bit_errors = 0;
};

/// One protocol run: buffer bring-up plus the per-slot state machine. Each
/// slot draws fresh block-fading channels, picks a mode, moves m packets (one
/// per antenna, one symbol of each per channel use) and accounts delivered
/// bits against the original source bits, so relay decision errors propagate
/// into the BER.
class ProtocolRun {
 public:
  ProtocolRun(const RunParams& params, StreamKey run_key);

  /// Reception-only bring-up until every relay holds floor(j/2) packets.
  /// Packets stored here keep their source bits and are scored on delivery.
  void initialize_buffers();

  SlotOutcome run_slot();

  const RunTotals& totals() const { return totals_; }
  const RunParams& params() const { return params_; }

  int buffered_packets() const;
  std::uint64_t packets_in_flight_or_delivered() const {
    return totals_.packets_created + totals_.packets_created_init;
  }

  /// Buffer access for white-box tests.
  std::vector<RelayBuffer>& buffers() { return buffers_; }
  const std::vector<RelayBuffer>& buffers() const { return buffers_; }

 private:
  Packet make_packet(Rng& bits_rng, std::uint64_t slot);
  std::vector<Packet> make_batch(Rng& bits_rng, std::uint64_t slot);
  /// Sends one batch over true_h and ML-decodes every channel use with the
  /// estimate; returns per-packet decoded bit strings.
  std::vector<std::vector<std::uint8_t>> transmit_batch(
      const std::vector<Packet>& batch, bool from_relay_bits,
      const LinkEstimate& link, double gain, Rng& noise_rng);
  std::vector<RelayAvailability> availability() const;

  RunParams params_;
  StreamKey run_key_;
  Constellation constellation_;
  CandidateSet candidates_;
  DifferenceVectors diffs_;
  std::vector<RelayBuffer> buffers_;
  std::uint64_t slot_counter_ = 0;  // covers init + measurement slots
  std::uint64_t next_packet_id_ = 0;
  bool initialized_ = false;
  RunTotals totals_;
};

}  // namespace relaysim
