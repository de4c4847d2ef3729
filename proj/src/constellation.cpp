#include "relaysim/constellation.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace relaysim {

namespace {

constexpr double kDedupTol = 1e-12;

bool nearly_equal(cdouble a, cdouble b) {
  return std::abs(a - b) < kDedupTol;
}

}  // namespace

const char* to_string(ConstellationKind kind) {
  switch (kind) {
    case ConstellationKind::Bpsk:
      return "bpsk";
    case ConstellationKind::Qpsk:
      return "qpsk";
  }
  return "?";
}

ConstellationKind constellation_from_string(std::string_view name) {
  if (name == "bpsk") return ConstellationKind::Bpsk;
  if (name == "qpsk") return ConstellationKind::Qpsk;
  throw ConfigError("unsupported constellation '" + std::string(name) +
                    "' (expected bpsk or qpsk)");
}

Constellation build_constellation(ConstellationKind kind) {
  Constellation c;
  c.kind = kind;
  switch (kind) {
    case ConstellationKind::Bpsk:
      c.bits_per_symbol = 1;
      c.symbols = {cdouble{1.0, 0.0}, cdouble{-1.0, 0.0}};  // bit 0 -> +1
      break;
    case ConstellationKind::Qpsk: {
      // Gray labeling: first bit selects the real sign, second the imaginary
      // sign, so circle neighbours differ in one bit.
      const double a = 1.0 / std::sqrt(2.0);
      c.bits_per_symbol = 2;
      c.symbols = {cdouble{a, a}, cdouble{a, -a}, cdouble{-a, a},
                   cdouble{-a, -a}};
      break;
    }
  }
  return c;
}

Constellation build_constellation(std::string_view name) {
  return build_constellation(constellation_from_string(name));
}

int CandidateSet::symbol_label(int k, int antenna) const {
  const int mask = (1 << bits_per_symbol) - 1;
  const int shift = (m - 1 - antenna) * bits_per_symbol;
  return (k >> shift) & mask;
}

CandidateSet enumerate_candidates(const Constellation& c, int m) {
  if (m < 1) throw ConfigError("antenna count must be >= 1");
  CandidateSet set;
  set.m = m;
  set.bits_per_symbol = c.bits_per_symbol;
  const int per_symbol = c.size();
  long long count = 1;
  for (int a = 0; a < m; ++a) count *= per_symbol;
  if (count > (1 << 20))
    throw ConfigError("candidate set too large for exhaustive enumeration");
  set.count = static_cast<int>(count);
  set.flat.resize(static_cast<std::size_t>(set.count) * m);
  for (int k = 0; k < set.count; ++k)
    for (int a = 0; a < m; ++a)
      set.flat[static_cast<std::size_t>(k) * m + a] =
          c.symbols[set.symbol_label(k, a)];
  return set;
}

DifferenceSet build_difference_set(const Constellation& c) {
  DifferenceSet ds;
  for (std::size_t a = 0; a < c.symbols.size(); ++a) {
    for (std::size_t b = 0; b < c.symbols.size(); ++b) {
      if (a == b) continue;
      cdouble d = c.symbols[a] - c.symbols[b];
      // Canonical sign: positive real part, or positive imaginary part on
      // the imaginary axis. Negation is exact, so the canonical value still
      // matches pairwise differences bit for bit.
      if (d.real() < -kDedupTol || (std::abs(d.real()) <= kDedupTol && d.imag() < 0.0))
        d = -d;
      bool seen = false;
      for (const cdouble& v : ds.values)
        if (nearly_equal(v, d)) {
          seen = true;
          break;
        }
      if (!seen) ds.values.push_back(d);
    }
  }
  return ds;
}

int bits_to_index(std::span<const std::uint8_t> bits) {
  int v = 0;
  for (const std::uint8_t b : bits) v = (v << 1) | (b & 1);
  return v;
}

void index_to_bits(int value, int nbits, std::uint8_t* out) {
  for (int i = 0; i < nbits; ++i)
    out[i] = static_cast<std::uint8_t>((value >> (nbits - 1 - i)) & 1);
}

std::vector<cdouble> map_bits_to_vector(std::span<const std::uint8_t> bits,
                                        const Constellation& c, int m) {
  const int expected = m * c.bits_per_symbol;
  if (static_cast<int>(bits.size()) != expected)
    throw std::invalid_argument("bit string length " +
                                std::to_string(bits.size()) + ", expected " +
                                std::to_string(expected));
  std::vector<cdouble> vec(m);
  for (int a = 0; a < m; ++a) {
    const auto slice = bits.subspan(
        static_cast<std::size_t>(a) * c.bits_per_symbol, c.bits_per_symbol);
    vec[a] = c.symbols[bits_to_index(slice)];
  }
  return vec;
}

std::vector<std::uint8_t> map_vector_to_bits(std::span<const cdouble> vec,
                                             const Constellation& c, int m) {
  if (static_cast<int>(vec.size()) != m)
    throw std::invalid_argument("vector length mismatch");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(m) *
                                 c.bits_per_symbol);
  for (int a = 0; a < m; ++a) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int s = 0; s < c.size(); ++s) {
      const double d = std::norm(vec[a] - c.symbols[s]);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    index_to_bits(best, c.bits_per_symbol,
                  bits.data() + static_cast<std::size_t>(a) * c.bits_per_symbol);
  }
  return bits;
}

}  // namespace relaysim
