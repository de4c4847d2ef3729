// Acceptance suite: one pass/fail line per criterion, exit code = failures.
// Desk-scale settings: N=3 unless stated otherwise, M=2, J=4, BPSK,
// 2000 packets per SNR point, fixed seeds.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "relaysim/analysis.hpp"
#include "relaysim/experiment.hpp"

using namespace relaysim;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr int kDeskPackets = 2000;
constexpr int kPepSlots = 10000;

int g_failures = 0;
std::vector<std::string> g_detail;

void detail(const std::string& line) { g_detail.push_back(line); }

void report(int number, const std::string& name, bool pass) {
  std::printf("[%s] criterion-%d %s\n", pass ? "PASS" : "FAIL", number,
              name.c_str());
  for (const std::string& line : g_detail) std::printf("    %s\n", line.c_str());
  g_detail.clear();
  if (!pass) ++g_failures;
}

std::string fmt(double v) { return format_sig(v); }

const BerRecord& record_for(const std::vector<BerRecord>& records, Variant v,
                            double snr_db) {
  for (const BerRecord& r : records)
    if (r.variant == v && r.snr_db == snr_db) return r;
  throw std::logic_error("missing record");
}

bool intervals_overlap(const BerRecord& a, const BerRecord& b) {
  return a.ci_lo <= b.ci_hi && b.ci_lo <= a.ci_hi;
}

ExperimentConfig desk_config() {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.m = 2;
  cfg.j = 4;
  cfg.constellation = ConstellationKind::Bpsk;
  cfg.snr_db_grid = {0, 2, 4, 6, 8, 10, 12};
  cfg.packets = kDeskPackets;
  cfg.symbols_per_packet = 100;
  cfg.seed = kSeed;
  cfg.n0 = 1.0;
  return cfg;
}

// Criterion 1: the MMD-selected link's normalized minimum distance dominates
// the QN-selected link's in every slot, and mean worst-case PEP follows.
bool criterion1() {
  const DifferenceVectors diffs = enumerate_difference_vectors(
      build_difference_set(build_constellation(ConstellationKind::Bpsk)), 2);
  const int n = 3, m = 2;
  bool pass = true;
  for (const double snr_db : {0.0, 6.0, 12.0}) {
    const double es = std::pow(10.0, snr_db / 10.0);
    const double g = cooperative_gain(es, m);
    std::uint64_t violations = 0;
    double sum_mmd = 0.0, sum_qn = 0.0;
    for (int s = 0; s < kPepSlots; ++s) {
      const SlotChannels slot = draw_slot_channels(
          StreamKey{kSeed, 0}.child(0xAC1).child(s), n, m,
          CsiModel::make_perfect(), es);
      double best_mmd = -1.0, best_qn = -1.0, qn_dmin = 0.0;
      for (int side = 0; side < 2; ++side)
        for (int i = 0; i < n; ++i) {
          const LinkEstimate& link = side == 0 ? slot.sr[i] : slot.rd[i];
          const double dmin = min_distance(link.estimated_h, diffs, g);
          const double qn = qn_metric(link.estimated_h);
          if (dmin > best_mmd) best_mmd = dmin;
          if (qn > best_qn) {
            best_qn = qn;
            qn_dmin = dmin;
          }
        }
      if (best_mmd < qn_dmin) ++violations;
      sum_mmd += pep_worst_case(d_prime_from_min_distance(best_mmd, es, m), es,
                                1.0, m, PepMode::Cooperative);
      sum_qn += pep_worst_case(d_prime_from_min_distance(qn_dmin, es, m), es,
                               1.0, m, PepMode::Cooperative);
    }
    const bool point_ok = violations == 0 && sum_mmd <= sum_qn;
    detail("snr " + fmt(snr_db) + " dB: dominance violations " +
           std::to_string(violations) + "/" + std::to_string(kPepSlots) +
           ", mean pep mmd " + fmt(sum_mmd / kPepSlots) + " <= qn " +
           fmt(sum_qn / kPepSlots) + (point_ok ? "" : "  <-- FAIL"));
    pass = pass && point_ok;
  }
  return pass;
}

// Criterion 2: at 12 dB the MMD mean PEP improves strictly with N (3, 5, 10)
// beyond Monte Carlo noise, while QN shows no comparable improvement.
bool criterion2() {
  PepCampaignConfig cfg;
  cfg.relay_counts = {3, 5, 10};
  cfg.m = 2;
  cfg.constellation = ConstellationKind::Bpsk;
  cfg.snr_db_grid = {12.0};
  cfg.slots = kPepSlots;
  cfg.seed = kSeed;
  const auto records = run_pep_campaign(cfg, 0);

  const auto find = [&](Criterion c, int n) -> const PepRecord& {
    for (const PepRecord& r : records)
      if (r.criterion == c && r.n_relays == n) return r;
    throw std::logic_error("missing pep record");
  };
  const PepRecord& m3 = find(Criterion::Mmd, 3);
  const PepRecord& m5 = find(Criterion::Mmd, 5);
  const PepRecord& m10 = find(Criterion::Mmd, 10);
  const PepRecord& q3 = find(Criterion::Qn, 3);
  const PepRecord& q10 = find(Criterion::Qn, 10);

  const bool mmd_ok = m5.ci_hi < m3.ci_lo && m10.ci_hi < m5.ci_lo;
  const bool qn_ok = q10.mean_pep >= 0.5 * q3.mean_pep &&
                     q10.mean_pep <= 2.0 * q3.mean_pep;
  detail("mmd mean pep: n3 " + fmt(m3.mean_pep) + " > n5 " + fmt(m5.mean_pep) +
         " > n10 " + fmt(m10.mean_pep) +
         (mmd_ok ? " (disjoint 95% intervals)" : "  <-- FAIL"));
  detail("qn mean pep: n3 " + fmt(q3.mean_pep) + ", n10 " + fmt(q10.mean_pep) +
         (qn_ok ? " (within 2x)" : "  <-- FAIL"));
  return mmd_ok && qn_ok;
}

// Shared rule for criteria 3(b)/4(b): switched <= mmd-maxlink everywhere,
// with at most one point excused by overlapping Wilson intervals.
bool switched_below_maxlink(const std::vector<BerRecord>& records,
                            const std::vector<double>& grid) {
  int excused = 0;
  bool ok = true;
  for (const double snr : grid) {
    const BerRecord& sw = record_for(records, Variant::MmdSwitched, snr);
    const BerRecord& ml = record_for(records, Variant::MmdMaxLink, snr);
    if (sw.ber <= ml.ber) continue;
    ++excused;
    if (!intervals_overlap(sw, ml)) {
      detail("switched " + fmt(sw.ber) + " > maxlink " + fmt(ml.ber) + " at " +
             fmt(snr) + " dB beyond intervals  <-- FAIL");
      ok = false;
    }
  }
  if (excused > 1) {
    detail("switched above maxlink at " + std::to_string(excused) +
           " points (1 allowed)  <-- FAIL");
    ok = false;
  }
  return ok;
}

// Criterion 3: BPSK, N=10 BER ordering (Fig. 4 trends).
bool criterion3() {
  ExperimentConfig cfg = desk_config();
  cfg.n = 10;
  const auto records = run_campaign(cfg, 0);

  bool a_ok = true;
  for (const double snr : cfg.snr_db_grid) {
    if (snr < 4.0) continue;
    const BerRecord& mmd = record_for(records, Variant::MmdMaxLink, snr);
    const BerRecord& qn = record_for(records, Variant::QnMaxLink, snr);
    if (!(mmd.ber < qn.ber)) {
      detail("(a) mmd-maxlink " + fmt(mmd.ber) + " !< qn-maxlink " +
             fmt(qn.ber) + " at " + fmt(snr) + " dB  <-- FAIL");
      a_ok = false;
    }
  }
  detail(std::string("(a) mmd-maxlink < qn-maxlink for snr >= 4 dB: ") +
         (a_ok ? "yes" : "no"));

  const bool b_ok = switched_below_maxlink(records, cfg.snr_db_grid);
  detail(std::string("(b) switched <= mmd-maxlink at every point: ") +
         (b_ok ? "yes" : "no"));

  const BerRecord& ml0 = record_for(records, Variant::MmdMaxLink, 0.0);
  const BerRecord& mimo0 = record_for(records, Variant::MimoDirect, 0.0);
  bool c_ok = ml0.ber > mimo0.ber;
  if (!c_ok)
    detail("(c) mmd-maxlink " + fmt(ml0.ber) + " !> mimo " + fmt(mimo0.ber) +
           " at 0 dB  <-- FAIL");
  for (const double snr : cfg.snr_db_grid) {
    if (snr < 4.0) continue;
    const BerRecord& ml = record_for(records, Variant::MmdMaxLink, snr);
    const BerRecord& mimo = record_for(records, Variant::MimoDirect, snr);
    if (!(ml.ber < mimo.ber)) {
      detail("(c) mmd-maxlink " + fmt(ml.ber) + " !< mimo " + fmt(mimo.ber) +
             " at " + fmt(snr) + " dB  <-- FAIL");
      c_ok = false;
    }
  }
  detail(std::string("(c) crossover vs mimo between 0 and 4 dB: ") +
         (c_ok ? "yes" : "no"));
  return a_ok && b_ok && c_ok;
}

// Criterion 4: QPSK, N=10; the crossover against MIMO moves upward (Fig. 5).
bool criterion4() {
  ExperimentConfig cfg = desk_config();
  cfg.n = 10;
  cfg.constellation = ConstellationKind::Qpsk;
  cfg.variants = {Variant::MmdSwitched, Variant::MmdMaxLink, Variant::MimoDirect};
  const auto records = run_campaign(cfg, 0);

  const bool b_ok = switched_below_maxlink(records, cfg.snr_db_grid);
  detail(std::string("(b) switched <= mmd-maxlink at every point: ") +
         (b_ok ? "yes" : "no"));

  const BerRecord& ml4 = record_for(records, Variant::MmdMaxLink, 4.0);
  const BerRecord& mimo4 = record_for(records, Variant::MimoDirect, 4.0);
  const BerRecord& ml10 = record_for(records, Variant::MmdMaxLink, 10.0);
  const BerRecord& mimo10 = record_for(records, Variant::MimoDirect, 10.0);
  const bool low_ok = mimo4.ber < ml4.ber;
  const bool high_ok = mimo10.ber > ml10.ber;
  detail("(c) at 4 dB mimo " + fmt(mimo4.ber) + " < mmd-maxlink " +
         fmt(ml4.ber) + ": " + (low_ok ? "yes" : "no  <-- FAIL"));
  detail("(c) at 10 dB mimo " + fmt(mimo10.ber) + " > mmd-maxlink " +
         fmt(ml10.ber) + ": " + (high_ok ? "yes" : "no  <-- FAIL"));
  return b_ok && low_ok && high_ok;
}

// Criterion 5: imperfect CSI (beta = 1), Fig. 6 trends.
bool criterion5() {
  ExperimentConfig base = desk_config();
  base.variants = {Variant::MmdSwitched, Variant::MimoDirect};

  ExperimentConfig alpha05 = base;
  alpha05.csi = CsiModel::make_imperfect(1.0, 0.5);
  ExperimentConfig alpha08 = base;
  alpha08.csi = CsiModel::make_imperfect(1.0, 0.8);

  const auto rec_perfect = run_campaign(base, 0);
  const auto rec05 = run_campaign(alpha05, 0);
  const auto rec08 = run_campaign(alpha08, 0);

  const BerRecord& sw05 = record_for(rec05, Variant::MmdSwitched, 8.0);
  const BerRecord& sw08 = record_for(rec08, Variant::MmdSwitched, 8.0);
  const BerRecord& swp = record_for(rec_perfect, Variant::MmdSwitched, 8.0);
  const bool order_ok = sw05.ci_lo > sw08.ci_hi && sw08.ci_lo > swp.ci_hi;
  detail("switched at 8 dB: alpha=0.5 " + fmt(sw05.ber) + " > alpha=0.8 " +
         fmt(sw08.ber) + " > perfect " + fmt(swp.ber) +
         (order_ok ? " (disjoint intervals)" : "  <-- FAIL"));

  bool mimo_ok = true;
  for (const auto* recs : {&rec05, &rec08}) {
    const double alpha = recs == &rec05 ? 0.5 : 0.8;
    for (const double snr : base.snr_db_grid) {
      const BerRecord& sw = record_for(*recs, Variant::MmdSwitched, snr);
      const BerRecord& mimo = record_for(*recs, Variant::MimoDirect, snr);
      if (!(sw.ber <= mimo.ber)) {
        detail("alpha=" + fmt(alpha) + ": switched " + fmt(sw.ber) +
               " > mimo " + fmt(mimo.ber) + " at " + fmt(snr) +
               " dB  <-- FAIL");
        mimo_ok = false;
      }
    }
  }
  detail(std::string("switched <= mimo across the grid: ") +
         (mimo_ok ? "yes" : "no"));
  return order_ok && mimo_ok;
}

// Criterion 6: complexity calculators and the instrumented search.
bool criterion6() {
  const std::uint64_t x21 = mmd_metric_evals(2, 1);
  const MmdOpCount mmd = mmd_op_count(3, 2, 1);
  const QnOpCount qn = qn_op_count(3, 2);
  bool pass = x21 == 4 && mmd.additions == 36 && mmd.multiplications == 48 &&
              qn.additions == 18 && qn.multiplications == 24;
  detail("X(m=2,w=1) = " + std::to_string(x21) + "; mmd ops " +
         std::to_string(mmd.additions) + "/" +
         std::to_string(mmd.multiplications) + " (want 36/48); qn ops " +
         std::to_string(qn.additions) + "/" + std::to_string(qn.multiplications) +
         " (want 18/24)");

  const Constellation bpsk = build_constellation(ConstellationKind::Bpsk);
  for (int m = 1; m <= 2; ++m) {
    const DifferenceVectors diffs =
        enumerate_difference_vectors(build_difference_set(bpsk), m);
    Rng rng(kSeed, 0xAC6);
    ChannelMatrix h = ChannelMatrix::zero(m);
    for (auto& e : h.a) e = rng.next_cgaussian(1.0);
    std::uint64_t evals = 0;
    min_distance(h, diffs, 1.0, &evals);
    const bool ok = evals == mmd_metric_evals(m, 1);
    detail("instrumented evals, bpsk m=" + std::to_string(m) + ": " +
           std::to_string(evals) + " == X " +
           std::to_string(mmd_metric_evals(m, 1)) + (ok ? "" : "  <-- FAIL"));
    pass = pass && ok;
  }
  return pass;
}

// Criterion 7: oracles. The difference-vector minimum equals the brute-force
// pair minimum exactly; ML detection returns the exhaustive argmin.
bool criterion7() {
  bool pass = true;
  for (const auto kind : {ConstellationKind::Bpsk, ConstellationKind::Qpsk}) {
    const Constellation c = build_constellation(kind);
    for (int m = 1; m <= 2; ++m) {
      const CandidateSet cands = enumerate_candidates(c, m);
      const DifferenceVectors diffs =
          enumerate_difference_vectors(build_difference_set(c), m);
      Rng rng(kSeed, 0xAC7 + m);
      int dmin_mismatches = 0;
      int ml_mismatches = 0;
      for (int t = 0; t < 1000; ++t) {
        ChannelMatrix h = ChannelMatrix::zero(m);
        for (auto& e : h.a) e = rng.next_cgaussian(1.0);
        const double gain = cooperative_gain(0.25 + rng.next_double(), m);

        double brute = std::numeric_limits<double>::infinity();
        for (int a = 0; a < cands.count; ++a)
          for (int b = a + 1; b < cands.count; ++b)
            brute = std::min(
                brute, pairwise_distance(h, cands.vec(a), cands.vec(b), gain));
        if (min_distance(h, diffs, gain) != brute) ++dmin_mismatches;

        // Noisy detection trial versus the exhaustive argmin.
        const int sent = static_cast<int>(rng.next_u32() % cands.count);
        std::vector<cdouble> y(m);
        h.mul(cands.vec(sent), y);
        for (auto& v : y) v = gain * v + rng.next_cgaussian(1.0);
        const DetectionResult r = ml_detect(y, h, gain, cands);
        int best = 0;
        double best_metric = std::numeric_limits<double>::infinity();
        for (int k = 0; k < cands.count; ++k) {
          std::vector<cdouble> img(m);
          h.mul(cands.vec(k), img);
          double d = 0.0;
          for (int i = 0; i < m; ++i) d += std::norm(y[i] - gain * img[i]);
          if (d < best_metric) {
            best_metric = d;
            best = k;
          }
        }
        if (r.index != best) ++ml_mismatches;
      }
      const bool ok = dmin_mismatches == 0 && ml_mismatches == 0;
      detail(std::string(to_string(kind)) + " m=" + std::to_string(m) +
             ": d_min mismatches " + std::to_string(dmin_mismatches) +
             "/1000, ml mismatches " + std::to_string(ml_mismatches) + "/1000" +
             (ok ? "" : "  <-- FAIL"));
      pass = pass && ok;
    }
  }
  return pass;
}

// Criterion 8: buffer invariants over 1e5 slots plus byte-identical output
// across worker counts.
bool criterion8() {
  RunParams params;
  params.n = 3;
  params.m = 2;
  params.j = 4;
  params.constellation = ConstellationKind::Bpsk;
  params.criterion = Criterion::Mmd;
  params.protocol = ProtocolKind::MaxLinkOnly;
  params.es = std::pow(10.0, 0.6);
  params.n0 = 1.0;
  params.symbols_per_packet = 100;
  ProtocolRun run(params, StreamKey{kSeed, 0}.child(0xAC8));
  run.initialize_buffers();

  std::vector<std::vector<std::uint64_t>> shadow(params.n);
  for (int i = 0; i < params.n; ++i)
    for (int k = 0; k < run.buffers()[i].size(); ++k)
      shadow[i].push_back(run.buffers()[i].peek(k).id);

  std::uint64_t occupancy_violations = 0, fifo_violations = 0;
  const int slots = 100000;
  for (int s = 0; s < slots; ++s) {
    const SlotOutcome out = run.run_slot();
    for (int i = 0; i < params.n; ++i) {
      const int size = run.buffers()[i].size();
      if (size < 0 || size > params.j) ++occupancy_violations;
    }
    if (out.decision.mode == Mode::Reception) {
      const RelayBuffer& buf = run.buffers()[out.decision.relay];
      for (int a = 0; a < params.m; ++a)
        shadow[out.decision.relay].push_back(
            buf.peek(buf.size() - params.m + a).id);
    } else if (out.decision.mode == Mode::Transmission) {
      auto& q = shadow[out.decision.relay];
      for (const auto& [id, bits] : out.delivered) {
        if (q.empty() || id != q.front()) ++fifo_violations;
        if (!q.empty()) q.erase(q.begin());
      }
    }
  }
  std::uint64_t buffered = 0;
  for (const auto& q : shadow) buffered += q.size();
  const bool conserve_ok =
      run.packets_in_flight_or_delivered() ==
          run.totals().packets_delivered + buffered &&
      buffered == static_cast<std::uint64_t>(run.buffered_packets());
  detail("1e5 slots: occupancy violations " +
         std::to_string(occupancy_violations) + ", fifo violations " +
         std::to_string(fifo_violations) + ", conservation " +
         (conserve_ok ? "holds" : "broken  <-- FAIL"));

  ExperimentConfig cfg = desk_config();
  cfg.packets = 200;
  cfg.symbols_per_packet = 20;
  cfg.snr_db_grid = {0, 6, 12};
  std::ostringstream w1, w8, w8b;
  emit_csv(run_campaign(cfg, 1), w1);
  emit_csv(run_campaign(cfg, 8), w8);
  emit_csv(run_campaign(cfg, 8), w8b);
  const bool bytes_ok = w1.str() == w8.str() && w8.str() == w8b.str();
  detail(std::string("workers 1 vs 8: output bytes ") +
         (bytes_ok ? "identical" : "differ  <-- FAIL"));

  return occupancy_violations == 0 && fifo_violations == 0 && conserve_ok &&
         bytes_ok;
}

}  // namespace

int main() {
  std::printf(
      "acceptance suite: desk scale (M=2, J=4, BPSK, %d packets/point, seed "
      "%llu)\n",
      kDeskPackets, static_cast<unsigned long long>(kSeed));
  report(1, "per-slot mmd dominance and mean pep order", criterion1());
  report(2, "mmd pep improves with relay count, qn does not", criterion2());
  report(3, "bpsk n=10 ber ordering and mimo crossover", criterion3());
  report(4, "qpsk n=10 ber ordering and shifted crossover", criterion4());
  report(5, "imperfect csi ordering and mimo comparison", criterion5());
  report(6, "complexity calculators exact values", criterion6());
  report(7, "minimum-distance and ml-detection oracles", criterion7());
  report(8, "buffer invariants and reproducibility", criterion8());
  if (g_failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
