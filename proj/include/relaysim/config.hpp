#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/constellation.hpp"
#include "relaysim/selection.hpp"

namespace relaysim {

/// The four simulated schemes.
enum class Variant { MmdSwitched, MmdMaxLink, QnMaxLink, MimoDirect };

const char* to_string(Variant v);
Variant variant_from_string(std::string_view name);
Criterion criterion_of(Variant v);
ProtocolKind protocol_of(Variant v);
/// Stable id used for substream derivation, independent of listing order.
std::uint64_t variant_id(Variant v);

struct ExperimentConfig {
  int n = 3;
  int m = 2;
  int j = 4;
  ConstellationKind constellation = ConstellationKind::Bpsk;
  std::vector<double> snr_db_grid = {0, 2, 4, 6, 8, 10, 12};
  int packets = 20000;
  int symbols_per_packet = 100;
  CsiModel csi;
  std::vector<Variant> variants = {Variant::MmdSwitched, Variant::MmdMaxLink,
                                   Variant::QnMaxLink, Variant::MimoDirect};
  std::uint64_t seed = 1;
  double n0 = 1.0;

  void validate() const;
};

/// Flat key = value text. '#' starts a comment; unknown or repeated keys are
/// errors. Omitted keys keep their defaults.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "0,2,4" or "0:2:12" (start:step:stop, inclusive).
std::vector<double> parse_double_grid(std::string_view text);
/// "3,5,10" or "1..4" (inclusive range).
std::vector<int> parse_int_list(std::string_view text);

}  // namespace relaysim
