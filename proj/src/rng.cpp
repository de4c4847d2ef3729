#include "relaysim/rng.hpp"

#include <cmath>
#include <numbers>

namespace relaysim {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  const std::uint32_t n0 = hi1 ^ c[1] ^ k0;
  const std::uint32_t n1 = lo1;
  const std::uint32_t n2 = hi0 ^ c[3] ^ k1;
  const std::uint32_t n3 = lo0;
  c[0] = n0;
  c[1] = n1;
  c[2] = n2;
  c[3] = n3;
}

}  // namespace

void philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2],
                   std::uint32_t out[4]) {
  std::uint32_t c[4] = {counter[0], counter[1], counter[2], counter[3]};
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int r = 0; r < 10; ++r) {
    if (r != 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    philox_round(c, k0, k1);
  }
  out[0] = c[0];
  out[1] = c[1];
  out[2] = c[2];
  out[3] = c[3];
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

StreamKey StreamKey::child(std::uint64_t tag) const {
  return {seed, mix64(id + 0x9E3779B97F4A7C15ull * (tag + 1))};
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t k = mix64(seed);
  key_[0] = static_cast<std::uint32_t>(k);
  key_[1] = static_cast<std::uint32_t>(k >> 32);
  stream_[0] = static_cast<std::uint32_t>(stream);
  stream_[1] = static_cast<std::uint32_t>(stream >> 32);
}

void Rng::refill() {
  const std::uint32_t counter[4] = {static_cast<std::uint32_t>(block_),
                                    static_cast<std::uint32_t>(block_ >> 32),
                                    stream_[0], stream_[1]};
  philox4x32_10(counter, key_, out_);
  ++block_;
  out_pos_ = 0;
}

std::uint32_t Rng::next_u32() {
  if (out_pos_ >= 4) refill();
  return out_[out_pos_++];
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

int Rng::next_bit() {
  if (bits_left_ == 0) {
    bit_cache_ = next_u32();
    bits_left_ = 32;
  }
  const int b = static_cast<int>(bit_cache_ & 1u);
  bit_cache_ >>= 1;
  --bits_left_;
  return b;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gaussian_;
  }
  // u1 on (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Rng::next_cgaussian(double variance) {
  const double s = std::sqrt(0.5 * variance);
  const double re = next_gaussian();
  const double im = next_gaussian();
  return {s * re, s * im};
}

}  // namespace relaysim
