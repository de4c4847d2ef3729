#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaysim/analysis.hpp"
#include "relaysim/config.hpp"
#include "relaysim/experiment.hpp"

namespace {

using namespace relaysim;

int cmd_run(const std::string& config_path, const std::string& out_path,
            int workers, const std::string& plot_stem,
            const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& csi,
            const std::optional<double>& beta,
            const std::optional<double>& alpha) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (beta) cfg.csi.beta = *beta;
  if (alpha) cfg.csi.alpha = *alpha;
  if (csi) {
    if (*csi == "perfect")
      cfg.csi.perfect = true;
    else if (*csi == "imperfect")
      cfg.csi.perfect = false;
    else
      throw ConfigError("--csi must be perfect or imperfect");
  }
  cfg.validate();

  const std::vector<BerRecord> records = run_campaign(cfg, workers);
  emit_csv(records, std::filesystem::path(out_path));
  if (!plot_stem.empty()) write_ber_plot_data(records, plot_stem);

  std::cout << "wrote " << records.size() << " records to " << out_path << '\n';
  return 0;
}

int cmd_pep(const std::string& n_list, const std::string& snr,
            const std::string& constellation, int m, int slots,
            std::uint64_t seed, double n0, const std::string& out_path,
            int workers, const std::string& plot_stem) {
  PepCampaignConfig cfg;
  cfg.relay_counts = parse_int_list(n_list);
  cfg.snr_db_grid = parse_double_grid(snr);
  cfg.constellation = constellation_from_string(constellation);
  cfg.m = m;
  cfg.slots = slots;
  cfg.seed = seed;
  cfg.n0 = n0;

  const std::vector<PepRecord> records = run_pep_campaign(cfg, workers);
  if (out_path.empty()) {
    emit_pep_csv(records, std::cout);
  } else {
    emit_pep_csv(records, std::filesystem::path(out_path));
    std::cout << "wrote " << records.size() << " records to " << out_path << '\n';
  }
  if (!plot_stem.empty()) write_pep_plot_data(records, plot_stem);
  return 0;
}

int cmd_complexity(const std::string& m_list, int n, int w,
                   const std::string& out_path) {
  const std::vector<int> ms = parse_int_list(m_list);
  std::ostringstream out;
  out << "n,m,w,mmd_metric_evals,mmd_additions,mmd_multiplications,"
         "qn_additions,qn_multiplications\n";
  for (const int m : ms) {
    const MmdOpCount mmd = mmd_op_count(n, m, w);
    const QnOpCount qn = qn_op_count(n, m);
    out << n << ',' << m << ',' << w << ',' << mmd.metric_evals << ','
        << mmd.additions << ',' << mmd.multiplications << ',' << qn.additions
        << ',' << qn.multiplications << '\n';
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path + " for writing");
    file << out.str();
    std::cout << "wrote complexity table to " << out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level simulator for buffer-aided multi-antenna relay selection"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a BER Monte Carlo campaign from a config file");
  std::string config_path, out_path, plot_stem;
  int workers = 0;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> csi_override;
  std::optional<double> beta_override, alpha_override;
  run->add_option("--config", config_path, "Config file (key = value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "Output CSV path")->required();
  run->add_option("--workers", workers, "Worker threads (0 = hardware)");
  run->add_option("--plot-data", plot_stem, "Also write per-curve files <stem><variant>.csv");
  run->add_option("--seed", seed_override, "Override the config seed");
  run->add_option("--csi", csi_override, "Override CSI mode: perfect|imperfect");
  run->add_option("--beta", beta_override, "Override CSI error beta");
  run->add_option("--alpha", alpha_override, "Override CSI error alpha");

  // pep
  auto* pep = app.add_subcommand("pep", "Average worst-case PEP of the MMD and QN criteria");
  std::string pep_n = "3,5,10", pep_snr = "0:2:12", pep_constellation = "bpsk";
  std::string pep_out, pep_plot;
  int pep_m = 2, pep_slots = 10000, pep_workers = 0;
  std::uint64_t pep_seed = 1;
  double pep_n0 = 1.0;
  pep->add_option("--n", pep_n, "Relay counts, e.g. 3,5,10");
  pep->add_option("--m", pep_m, "Antennas per node");
  pep->add_option("--constellation", pep_constellation, "bpsk|qpsk");
  pep->add_option("--snr", pep_snr, "SNR grid in dB: list or start:step:stop");
  pep->add_option("--slots", pep_slots, "Monte Carlo slots per point");
  pep->add_option("--seed", pep_seed, "Random seed");
  pep->add_option("--n0", pep_n0, "Noise level N0");
  pep->add_option("--out", pep_out, "Output CSV path (default stdout)");
  pep->add_option("--workers", pep_workers, "Worker threads (0 = hardware)");
  pep->add_option("--plot-data", pep_plot, "Also write per-curve files");

  // complexity
  auto* cx = app.add_subcommand("complexity", "Operation counts of the MMD and QN criteria");
  std::string cx_m = "1..4", cx_out;
  int cx_n = 3, cx_w = 1;
  cx->add_option("--m", cx_m, "Antenna counts, e.g. 1..4 or 1,2,3");
  cx->add_option("--n", cx_n, "Relay count");
  cx->add_option("--w", cx_w, "Distinct constellation distances (1 for BPSK)");
  cx->add_option("--out", cx_out, "Output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, out_path, workers, plot_stem, seed_override,
                     csi_override, beta_override, alpha_override);
    if (pep->parsed())
      return cmd_pep(pep_n, pep_snr, pep_constellation, pep_m, pep_slots,
                     pep_seed, pep_n0, pep_out, pep_workers, pep_plot);
    if (cx->parsed()) return cmd_complexity(cx_m, cx_n, cx_w, cx_out);
  } catch (const relaysim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
