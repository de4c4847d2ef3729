#include "relaysim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "relaysim/analysis.hpp"

namespace relaysim {

namespace {

constexpr std::uint64_t kTagBerCampaign = 0xBE;
constexpr std::uint64_t kTagPepCampaign = 0x9E9;
constexpr double kZ95 = 1.959963984540054;

std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

/// Runs jobs 0..count-1 over a small worker pool; any exception is rethrown
/// on the caller after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  int w = workers > 0 ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  if (static_cast<std::size_t>(w) > count) w = static_cast<int>(count);
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

BerRecord run_ber_cell(const ExperimentConfig& cfg, Variant variant,
                       double snr_db) {
  RunParams params;
  params.n = cfg.n;
  params.m = cfg.m;
  params.j = cfg.j;
  params.constellation = cfg.constellation;
  params.criterion = criterion_of(variant);
  params.protocol = protocol_of(variant);
  params.csi = cfg.csi;
  params.es = cfg.n0 * std::pow(10.0, snr_db / 10.0);
  params.n0 = cfg.n0;
  params.symbols_per_packet = cfg.symbols_per_packet;

  // Cell substreams depend only on (seed, variant, snr), never on grid or
  // worker layout.
  const StreamKey cell_key = StreamKey{cfg.seed, 0}
                                 .child(kTagBerCampaign)
                                 .child(variant_id(variant))
                                 .child(double_bits(snr_db));

  ProtocolRun run(params, cell_key);
  run.initialize_buffers();
  while (run.totals().packets_created < static_cast<std::uint64_t>(cfg.packets))
    run.run_slot();

  const RunTotals& t = run.totals();
  BerRecord rec;
  rec.variant = variant;
  rec.snr_db = snr_db;
  rec.bits_delivered = t.bits_delivered;
  rec.bit_errors = t.bit_errors;
  rec.ber = t.bits_delivered == 0
                ? 0.0
                : static_cast<double>(t.bit_errors) / t.bits_delivered;
  const WilsonInterval ci = wilson_interval(t.bit_errors, t.bits_delivered);
  rec.ci_lo = ci.lo;
  rec.ci_hi = ci.hi;
  rec.slots = t.slots;
  rec.n_direct = t.n_direct;
  rec.n_reception = t.n_reception;
  rec.n_transmission = t.n_transmission;
  rec.packets_undelivered = run.buffered_packets();
  return rec;
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The bounds are exactly 0 / 1 at the boundary counts; rounding in the
  // square root would otherwise leave ~1e-19 residue.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

std::vector<BerRecord> run_campaign(const ExperimentConfig& config,
                                    int workers) {
  config.validate();
  struct Cell {
    Variant variant;
    double snr_db;
  };
  std::vector<Cell> cells;
  for (const Variant v : config.variants)
    for (const double snr : config.snr_db_grid) cells.push_back({v, snr});

  std::vector<BerRecord> records(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    records[i] = run_ber_cell(config, cells[i].variant, cells[i].snr_db);
  });
  return records;
}

void PepCampaignConfig::validate() const {
  if (relay_counts.empty()) throw ConfigError("relay count list must not be empty");
  for (const int n : relay_counts)
    if (n < 1) throw ConfigError("relay counts must be >= 1");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (snr_db_grid.empty()) throw ConfigError("snr grid must not be empty");
  if (slots < 2) throw ConfigError("need at least 2 slots");
  if (n0 <= 0.0) throw ConfigError("n0 must be positive");
}

std::vector<PepRecord> run_pep_campaign(const PepCampaignConfig& config,
                                        int workers) {
  config.validate();
  const Constellation constellation = build_constellation(config.constellation);
  const DifferenceVectors diffs = enumerate_difference_vectors(
      build_difference_set(constellation), config.m);

  struct Cell {
    int n;
    double snr_db;
  };
  std::vector<Cell> cells;
  for (const int n : config.relay_counts)
    for (const double snr : config.snr_db_grid) cells.push_back({n, snr});

  // Two records per cell: MMD then QN.
  std::vector<PepRecord> records(2 * cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    const Cell cell = cells[i];
    const double es = config.n0 * std::pow(10.0, cell.snr_db / 10.0);
    const StreamKey cell_key = StreamKey{config.seed, 0}
                                   .child(kTagPepCampaign)
                                   .child(static_cast<std::uint64_t>(cell.n))
                                   .child(double_bits(cell.snr_db));
    double sum_mmd = 0.0, sumsq_mmd = 0.0;
    double sum_qn = 0.0, sumsq_qn = 0.0;
    for (int s = 0; s < config.slots; ++s) {
      const SlotChannels channels =
          draw_slot_channels(cell_key.child(s), cell.n, config.m,
                             CsiModel::make_perfect(), es);
      const auto [pep_mmd, pep_qn] =
          mmd_vs_qn_pep(channels, diffs, es, config.n0);
      sum_mmd += pep_mmd;
      sumsq_mmd += pep_mmd * pep_mmd;
      sum_qn += pep_qn;
      sumsq_qn += pep_qn * pep_qn;
    }
    const auto make_record = [&](Criterion criterion, double sum,
                                 double sumsq) {
      PepRecord rec;
      rec.criterion = criterion;
      rec.snr_db = cell.snr_db;
      rec.n_relays = cell.n;
      rec.m = config.m;
      rec.slots = config.slots;
      rec.mean_pep = sum / config.slots;
      const double var =
          std::max(0.0, (sumsq - config.slots * rec.mean_pep * rec.mean_pep) /
                            (config.slots - 1));
      const double half = kZ95 * std::sqrt(var / config.slots);
      rec.ci_lo = std::max(0.0, rec.mean_pep - half);
      rec.ci_hi = std::min(1.0, rec.mean_pep + half);
      return rec;
    };
    records[2 * i] = make_record(Criterion::Mmd, sum_mmd, sumsq_mmd);
    records[2 * i + 1] = make_record(Criterion::Qn, sum_qn, sumsq_qn);
  });
  return records;
}

std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void emit_csv(const std::vector<BerRecord>& records, std::ostream& out) {
  if (records.empty()) throw std::invalid_argument("no records to emit");
  out << "variant,snr_db,bits,errors,ber,ci_lo,ci_hi,slots,n_direct,n_rx,n_tx\n";
  for (const BerRecord& r : records) {
    out << to_string(r.variant) << ',' << format_sig(r.snr_db) << ','
        << r.bits_delivered << ',' << r.bit_errors << ',' << format_sig(r.ber)
        << ',' << format_sig(r.ci_lo) << ',' << format_sig(r.ci_hi) << ','
        << r.slots << ',' << r.n_direct << ',' << r.n_reception << ','
        << r.n_transmission << '\n';
  }
}

void emit_csv(const std::vector<BerRecord>& records,
              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_csv(records, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

}  // namespace

std::vector<BerRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty csv input");
  if (line != "variant,snr_db,bits,errors,ber,ci_lo,ci_hi,slots,n_direct,n_rx,n_tx")
    throw std::runtime_error("unexpected csv header: " + line);
  std::vector<BerRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw std::runtime_error("bad csv row: " + line);
    BerRecord r;
    r.variant = variant_from_string(f[0]);
    r.snr_db = std::stod(f[1]);
    r.bits_delivered = std::stoull(f[2]);
    r.bit_errors = std::stoull(f[3]);
    r.ber = std::stod(f[4]);
    r.ci_lo = std::stod(f[5]);
    r.ci_hi = std::stod(f[6]);
    r.slots = std::stoull(f[7]);
    r.n_direct = std::stoull(f[8]);
    r.n_reception = std::stoull(f[9]);
    r.n_transmission = std::stoull(f[10]);
    records.push_back(r);
  }
  return records;
}

std::vector<BerRecord> parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_csv(in);
}

void emit_pep_csv(const std::vector<PepRecord>& records, std::ostream& out) {
  if (records.empty()) throw std::invalid_argument("no records to emit");
  out << "criterion,snr_db,n,m,slots,mean_pep,ci_lo,ci_hi\n";
  for (const PepRecord& r : records) {
    out << (r.criterion == Criterion::Mmd ? "mmd" : "qn") << ','
        << format_sig(r.snr_db) << ',' << r.n_relays << ',' << r.m << ','
        << r.slots << ',' << format_sig(r.mean_pep) << ','
        << format_sig(r.ci_lo) << ',' << format_sig(r.ci_hi) << '\n';
  }
}

void emit_pep_csv(const std::vector<PepRecord>& records,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_pep_csv(records, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_ber_plot_data(const std::vector<BerRecord>& records,
                         const std::string& stem) {
  std::vector<Variant> seen;
  for (const BerRecord& r : records) {
    if (std::find(seen.begin(), seen.end(), r.variant) != seen.end()) continue;
    seen.push_back(r.variant);
    std::ofstream out(stem + to_string(r.variant) + ".csv");
    if (!out) throw std::runtime_error("cannot write plot data for " + stem);
    out << "snr_db,ber\n";
    for (const BerRecord& s : records)
      if (s.variant == r.variant)
        out << format_sig(s.snr_db) << ',' << format_sig(s.ber) << '\n';
  }
}

void write_pep_plot_data(const std::vector<PepRecord>& records,
                         const std::string& stem) {
  struct Curve {
    Criterion criterion;
    int n;
  };
  std::vector<Curve> seen;
  for (const PepRecord& r : records) {
    bool found = false;
    for (const Curve& c : seen)
      if (c.criterion == r.criterion && c.n == r.n_relays) found = true;
    if (found) continue;
    seen.push_back({r.criterion, r.n_relays});
    const std::string name = stem +
                             (r.criterion == Criterion::Mmd ? "mmd" : "qn") +
                             "_n" + std::to_string(r.n_relays) + ".csv";
    std::ofstream out(name);
    if (!out) throw std::runtime_error("cannot write plot data for " + stem);
    out << "snr_db,pep\n";
    for (const PepRecord& s : records)
      if (s.criterion == r.criterion && s.n_relays == r.n_relays)
        out << format_sig(s.snr_db) << ',' << format_sig(s.mean_pep) << '\n';
  }
}

}  // namespace relaysim
