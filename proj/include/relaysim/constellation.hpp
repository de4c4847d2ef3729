#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "relaysim/types.hpp"

namespace relaysim {

enum class ConstellationKind { Bpsk, Qpsk };

const char* to_string(ConstellationKind kind);
ConstellationKind constellation_from_string(std::string_view name);

/// Unit-average-power constellation. symbols[v] is the point whose bit label
/// has integer value v (most significant bit first).
struct Constellation {
  ConstellationKind kind;
  int bits_per_symbol;
  std::vector<cdouble> symbols;

  int size() const { return static_cast<int>(symbols.size()); }
};

Constellation build_constellation(ConstellationKind kind);
Constellation build_constellation(std::string_view name);

/// All size^m transmit vectors for m antennas, in bit-label order: candidate
/// k carries the m*bits_per_symbol bits of k (MSB first), antenna 0 taking
/// the leading bits.
struct CandidateSet {
  int m = 0;
  int bits_per_symbol = 0;
  int count = 0;
  std::vector<cdouble> flat;  // count * m, row per candidate

  std::span<const cdouble> vec(int k) const {
    return {flat.data() + static_cast<std::size_t>(k) * m,
            static_cast<std::size_t>(m)};
  }
  int bits_per_vector() const { return m * bits_per_symbol; }
  /// Per-antenna symbol label of candidate k.
  int symbol_label(int k, int antenna) const;
};

CandidateSet enumerate_candidates(const Constellation& c, int m);

/// Distinct nonzero differences between constellation symbols, deduplicated
/// up to sign. The stored values are exact symbol differences so downstream
/// metric evaluations reproduce pairwise arithmetic bit for bit.
struct DifferenceSet {
  std::vector<cdouble> values;

  int w() const { return static_cast<int>(values.size()); }
};

DifferenceSet build_difference_set(const Constellation& c);

/// Integer value of an MSB-first bit string.
int bits_to_index(std::span<const std::uint8_t> bits);
/// MSB-first bits of value, width nbits.
void index_to_bits(int value, int nbits, std::uint8_t* out);

std::vector<cdouble> map_bits_to_vector(std::span<const std::uint8_t> bits,
                                        const Constellation& c, int m);
std::vector<std::uint8_t> map_vector_to_bits(std::span<const cdouble> vec,
                                             const Constellation& c, int m);

}  // namespace relaysim
