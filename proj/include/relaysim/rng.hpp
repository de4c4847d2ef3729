#pragma once

#include <complex>
#include <cstdint>

namespace relaysim {

/// One block of the Philox4x32-10 counter-based generator.
/// Exposed so tests can pin the implementation to published vectors.
void philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2],
                   std::uint32_t out[4]);

/// splitmix64 finalizer; bijective 64-bit mixer used for stream derivation.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based random generator. The 64-bit stream id sits in the upper
/// counter words, so any number of independent substreams can be drawn from
/// one seed without coordination between workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  int next_bit();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double();

  /// Standard normal via Box-Muller (pairs cached).
  double next_gaussian();

  /// Circularly-symmetric complex Gaussian with the given total variance,
  /// split equally between real and imaginary parts.
  std::complex<double> next_cgaussian(double variance);

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t stream_[2];
  std::uint64_t block_ = 0;
  std::uint32_t out_[4] = {};
  int out_pos_ = 4;
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
  std::uint32_t bit_cache_ = 0;
  int bits_left_ = 0;
};

/// Hierarchical stream label. child(tag) derives a new independent stream id,
/// so (seed, slot, link, purpose) chains map to disjoint counter spaces and
/// the realized randomness is independent of execution order.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t id = 0;

  StreamKey child(std::uint64_t tag) const;
  Rng rng() const { return Rng(seed, id); }
};

}  // namespace relaysim
