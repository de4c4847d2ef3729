#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "relaysim/config.hpp"
#include "relaysim/protocol.hpp"

namespace relaysim {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for a binomial proportion; well behaved at zero
/// error counts. trials == 0 yields the vacuous [0, 1].
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

struct BerRecord {
  Variant variant;
  double snr_db = 0.0;
  std::uint64_t bits_delivered = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  std::uint64_t slots = 0;
  std::uint64_t n_direct = 0;
  std::uint64_t n_reception = 0;
  std::uint64_t n_transmission = 0;
  // Diagnostics, not part of the CSV schema: packets still buffered when the
  // budget ran out (never delivered, excluded from the BER).
  std::uint64_t packets_undelivered = 0;
};

struct PepRecord {
  Criterion criterion;
  double snr_db = 0.0;
  int n_relays = 0;
  int m = 0;
  std::uint64_t slots = 0;
  double mean_pep = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Runs every (variant, snr) cell of the config: buffer bring-up, then the
/// slot loop until `packets` source packets exist post-initialization. Cells
/// run on derived substreams, so results are identical for any worker count.
/// workers <= 0 means one per hardware thread.
std::vector<BerRecord> run_campaign(const ExperimentConfig& config,
                                    int workers = 0);

struct PepCampaignConfig {
  std::vector<int> relay_counts = {3, 5, 10};
  int m = 2;
  ConstellationKind constellation = ConstellationKind::Bpsk;
  std::vector<double> snr_db_grid = {0, 2, 4, 6, 8, 10, 12};
  int slots = 10000;
  std::uint64_t seed = 1;
  double n0 = 1.0;

  void validate() const;
};

/// Monte Carlo average of the per-slot worst-case PEP at the link selected
/// by each criterion, over fresh channel draws with every link eligible.
std::vector<PepRecord> run_pep_campaign(const PepCampaignConfig& config,
                                        int workers = 0);

// --- CSV emission -----------------------------------------------------------

/// Column order: variant,snr_db,bits,errors,ber,ci_lo,ci_hi,slots,n_direct,
/// n_rx,n_tx. Floats carry 6 significant digits.
void emit_csv(const std::vector<BerRecord>& records, std::ostream& out);
void emit_csv(const std::vector<BerRecord>& records,
              const std::filesystem::path& path);
std::vector<BerRecord> parse_csv(std::istream& in);
std::vector<BerRecord> parse_csv(const std::filesystem::path& path);

/// Columns: criterion,snr_db,n,m,slots,mean_pep,ci_lo,ci_hi.
void emit_pep_csv(const std::vector<PepRecord>& records, std::ostream& out);
void emit_pep_csv(const std::vector<PepRecord>& records,
                  const std::filesystem::path& path);

/// One file per curve (x = snr_db, y = ber or pep), named
/// <stem><curve>.csv, for external plotting.
void write_ber_plot_data(const std::vector<BerRecord>& records,
                         const std::string& stem);
void write_pep_plot_data(const std::vector<PepRecord>& records,
                         const std::string& stem);

std::string format_sig(double v);  // %.6g

}  // namespace relaysim
