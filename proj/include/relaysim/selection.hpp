#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/constellation.hpp"

namespace relaysim {

enum class Criterion { Mmd, Qn };
enum class ProtocolKind { SwitchedMaxLink, MaxLinkOnly, DirectOnly };
enum class Mode { Direct, Reception, Transmission };
enum class LinkKind { SourceRelay, RelayDestination, SourceDestination };

const char* to_string(Mode mode);

/// Transmit amplitude per antenna: cooperative hops carry es/m, direct
/// transmissions 2*es/m.
double cooperative_gain(double es, int m);
double direct_gain(double es, int m);

/// || gain * H * (x_l - x_n) ||^2 for one candidate pair.
double pairwise_distance(const ChannelMatrix& h, std::span<const cdouble> x_l,
                         std::span<const cdouble> x_n, double gain);

/// The distinct per-antenna difference vectors between candidate symbol
/// vectors, deduplicated up to a global sign: the first nonzero component
/// ranges over the canonical difference values, later components over the
/// signed ones. Minimizing over these reproduces the minimum over all
/// candidate pairs exactly, in sum_{i=1..m} C(m,i) * w^i * 2^(i-1)
/// evaluations instead of C(count, 2).
struct DifferenceVectors {
  int m = 0;
  int count = 0;
  std::vector<cdouble> flat;  // count * m

  std::span<const cdouble> vec(int k) const {
    return {flat.data() + static_cast<std::size_t>(k) * m,
            static_cast<std::size_t>(m)};
  }
};

DifferenceVectors enumerate_difference_vectors(const DifferenceSet& ds, int m);

/// Minimum pairwise distance of a link, via the difference-vector set.
/// metric_evals, when given, receives the number of metric evaluations.
double min_distance(const ChannelMatrix& estimated_h,
                    const DifferenceVectors& diffs, double gain,
                    std::uint64_t* metric_evals = nullptr);

/// Squared Frobenius norm of the estimated channel matrix.
double qn_metric(const ChannelMatrix& estimated_h);

struct LinkMetric {
  LinkKind kind;
  int relay = -1;  // -1 for the SD link
  double min_distance = 0.0;
  double quad_norm = 0.0;
  bool eligible = false;
};

struct SlotDecision {
  Mode mode;
  int relay = -1;  // target relay for Reception/Transmission
  double winning_metric = 0.0;
  std::vector<LinkMetric> metrics;  // SR 0..n-1, RD 0..n-1, SD last
};

/// Buffer-derived eligibility, computed by the protocol layer: a relay can
/// receive only with >= m free packet slots and transmit only with >= m
/// stored packets.
struct RelayAvailability {
  bool can_receive = false;
  bool can_transmit = false;
};

/// Per-slot mode decision over the estimated channels.
///
/// Max-Link part: the eligible SR/RD link maximizing the criterion metric,
/// ties resolved to the lowest relay index with SR ahead of RD. Switched
/// mode goes direct when the SD metric is >= the Max-Link winner (inclusive).
/// MaxLinkOnly with nothing eligible raises StallError; SwitchedMaxLink
/// falls back to direct transmission in that corner.
SlotDecision decide_slot(const SlotChannels& channels,
                         std::span<const RelayAvailability> availability,
                         Criterion criterion, ProtocolKind protocol, double es,
                         const DifferenceVectors& diffs);

}  // namespace relaysim
