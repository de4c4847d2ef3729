#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "relaysim/channel.hpp"
#include "relaysim/selection.hpp"

namespace relaysim {

/// Gaussian tail probability Q(x) = 0.5 * erfc(x / sqrt(2)).
double q_function(double x);

enum class PepMode { Direct, Cooperative };

/// Worst-case pairwise error probability at energy-normalized minimum
/// distance d'_min. Direct transmissions use the single-hop tail; the
/// cooperative value compounds the two hops:
///   q = Q(sqrt(es * d'_min / (2 * n0 * m)))
///   direct -> q,  cooperative -> 1 - (1 - q)^2.
double pep_worst_case(double d_prime_min, double es, double n0, int m,
                      PepMode mode);

/// Energy-normalized minimum distance of a link metric computed at the
/// cooperative or direct gain: d' = d_min * m / es.
double d_prime_from_min_distance(double min_distance, double es, int m);

/// Worst-case PEP of the link each criterion picks from the same slot.
/// Selection runs over the cooperative SR/RD links (an availability mask may
/// restrict them; by default all 2n links compete). The first value never
/// exceeds the second: the MMD winner maximizes the distance the PEP
/// argument depends on.
std::pair<double, double> mmd_vs_qn_pep(
    const SlotChannels& channels, const DifferenceVectors& diffs, double es,
    double n0, std::span<const RelayAvailability> availability = {});

/// Metric evaluations needed per channel matrix by the difference-vector
/// minimum-distance search: sum_{i=1..m} 2^(i-1) * w^i * C(m, i).
std::uint64_t mmd_metric_evals(int m, int w);

struct MmdOpCount {
  std::uint64_t metric_evals = 0;
  std::uint64_t additions = 0;        // 2*n*m*(X - 1)
  std::uint64_t multiplications = 0;  // 2*n*m*X
};

MmdOpCount mmd_op_count(int n, int m, int w);

struct QnOpCount {
  std::uint64_t additions = 0;        // 2*n*(m^2 - 1)
  std::uint64_t multiplications = 0;  // 2*n*m^2
};

QnOpCount qn_op_count(int n, int m);

}  // namespace relaysim
