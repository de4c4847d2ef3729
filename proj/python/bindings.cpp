#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "relaysim/analysis.hpp"
#include "relaysim/experiment.hpp"

namespace py = pybind11;
using namespace relaysim;

namespace {

ChannelMatrix to_matrix(const std::vector<std::vector<cdouble>>& rows) {
  const int m = static_cast<int>(rows.size());
  ChannelMatrix h = ChannelMatrix::zero(m);
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(rows[r].size()) != m)
      throw std::invalid_argument("channel matrix must be square");
    for (int c = 0; c < m; ++c) h.at(r, c) = rows[r][c];
  }
  return h;
}

PepMode pep_mode_from_string(const std::string& name) {
  if (name == "direct") return PepMode::Direct;
  if (name == "cooperative") return PepMode::Cooperative;
  throw std::invalid_argument("mode must be 'direct' or 'cooperative'");
}

DifferenceVectors diffs_for(const std::string& kind, int m) {
  const Constellation c = build_constellation(kind);
  return enumerate_difference_vectors(build_difference_set(c), m);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Buffer-aided relay selection link-level simulator";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<StallError>(m, "StallError");

  // Analysis
  m.def("q_function", &q_function, py::arg("x"),
        "Gaussian tail probability Q(x).");
  m.def(
      "pep_worst_case",
      [](double d_prime_min, double es, double n0, int m_, const std::string& mode) {
        return pep_worst_case(d_prime_min, es, n0, m_, pep_mode_from_string(mode));
      },
      py::arg("d_prime_min"), py::arg("es"), py::arg("n0"), py::arg("m"),
      py::arg("mode"),
      "Worst-case pairwise error probability ('direct' or 'cooperative').");
  m.def("mmd_metric_evals", &mmd_metric_evals, py::arg("m"), py::arg("w"));
  m.def(
      "mmd_op_count",
      [](int n, int m_, int w) {
        const MmdOpCount c = mmd_op_count(n, m_, w);
        return py::make_tuple(c.metric_evals, c.additions, c.multiplications);
      },
      py::arg("n"), py::arg("m"), py::arg("w"),
      "(metric evaluations, additions, multiplications)");
  m.def(
      "qn_op_count",
      [](int n, int m_) {
        const QnOpCount c = qn_op_count(n, m_);
        return py::make_tuple(c.additions, c.multiplications);
      },
      py::arg("n"), py::arg("m"), "(additions, multiplications)");

  // Constellations and selection metrics
  m.def(
      "constellation_symbols",
      [](const std::string& kind) {
        return build_constellation(kind).symbols;
      },
      py::arg("kind"), "Symbol points in bit-label order.");
  m.def(
      "candidate_vectors",
      [](const std::string& kind, int m_) {
        const Constellation c = build_constellation(kind);
        const CandidateSet set = enumerate_candidates(c, m_);
        std::vector<std::vector<cdouble>> out(set.count);
        for (int k = 0; k < set.count; ++k)
          out[k].assign(set.vec(k).begin(), set.vec(k).end());
        return out;
      },
      py::arg("kind"), py::arg("m"),
      "All candidate transmit vectors in bit-label order.");
  m.def(
      "difference_values",
      [](const std::string& kind) {
        return build_difference_set(build_constellation(kind)).values;
      },
      py::arg("kind"), "Distinct symbol differences, deduplicated up to sign.");
  m.def("cooperative_gain", &cooperative_gain, py::arg("es"), py::arg("m"));
  m.def("direct_gain", &direct_gain, py::arg("es"), py::arg("m"));
  m.def(
      "pairwise_distance",
      [](const std::vector<std::vector<cdouble>>& h, const std::vector<cdouble>& xl,
         const std::vector<cdouble>& xn, double gain) {
        return pairwise_distance(to_matrix(h), xl, xn, gain);
      },
      py::arg("h"), py::arg("x_l"), py::arg("x_n"), py::arg("gain"));
  m.def(
      "min_distance",
      [](const std::vector<std::vector<cdouble>>& h, const std::string& kind,
         double gain) {
        const ChannelMatrix mat = to_matrix(h);
        return min_distance(mat, diffs_for(kind, mat.m), gain);
      },
      py::arg("h"), py::arg("kind"), py::arg("gain"),
      "Minimum pairwise distance of a link matrix.");
  m.def(
      "qn_metric",
      [](const std::vector<std::vector<cdouble>>& h) {
        return qn_metric(to_matrix(h));
      },
      py::arg("h"), "Squared Frobenius norm.");
  m.def(
      "ml_detect",
      [](const std::vector<cdouble>& received,
         const std::vector<std::vector<cdouble>>& h, double gain,
         const std::string& kind) {
        const ChannelMatrix mat = to_matrix(h);
        const Constellation c = build_constellation(kind);
        const CandidateSet cands = enumerate_candidates(c, mat.m);
        const DetectionResult r = ml_detect(received, mat, gain, cands);
        return py::make_tuple(r.index, r.metric);
      },
      py::arg("received"), py::arg("h"), py::arg("gain"), py::arg("kind"),
      "(candidate index, squared distance) of the ML solution.");

  // Experiment campaigns
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("m", &ExperimentConfig::m)
      .def_readwrite("j", &ExperimentConfig::j)
      .def_readwrite("snr_db_grid", &ExperimentConfig::snr_db_grid)
      .def_readwrite("packets", &ExperimentConfig::packets)
      .def_readwrite("symbols_per_packet", &ExperimentConfig::symbols_per_packet)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("n0", &ExperimentConfig::n0)
      .def_property(
          "constellation",
          [](const ExperimentConfig& c) {
            return std::string(to_string(c.constellation));
          },
          [](ExperimentConfig& c, const std::string& kind) {
            c.constellation = constellation_from_string(kind);
          })
      .def_property(
          "variants",
          [](const ExperimentConfig& c) {
            std::vector<std::string> names;
            for (const Variant v : c.variants) names.emplace_back(to_string(v));
            return names;
          },
          [](ExperimentConfig& c, const std::vector<std::string>& names) {
            c.variants.clear();
            for (const std::string& n : names)
              c.variants.push_back(variant_from_string(n));
          })
      .def("set_perfect_csi",
           [](ExperimentConfig& c) { c.csi = CsiModel::make_perfect(); })
      .def(
          "set_imperfect_csi",
          [](ExperimentConfig& c, double beta, double alpha) {
            c.csi = CsiModel::make_imperfect(beta, alpha);
          },
          py::arg("beta"), py::arg("alpha"))
      .def("validate", &ExperimentConfig::validate);

  py::class_<BerRecord>(m, "BerRecord")
      .def_property_readonly(
          "variant",
          [](const BerRecord& r) { return std::string(to_string(r.variant)); })
      .def_readonly("snr_db", &BerRecord::snr_db)
      .def_readonly("bits_delivered", &BerRecord::bits_delivered)
      .def_readonly("bit_errors", &BerRecord::bit_errors)
      .def_readonly("ber", &BerRecord::ber)
      .def_readonly("ci_lo", &BerRecord::ci_lo)
      .def_readonly("ci_hi", &BerRecord::ci_hi)
      .def_readonly("slots", &BerRecord::slots)
      .def_readonly("n_direct", &BerRecord::n_direct)
      .def_readonly("n_reception", &BerRecord::n_reception)
      .def_readonly("n_transmission", &BerRecord::n_transmission)
      .def("__repr__", [](const BerRecord& r) {
        std::ostringstream out;
        out << "BerRecord(" << to_string(r.variant) << ", " << r.snr_db
            << " dB, ber=" << format_sig(r.ber) << ")";
        return out.str();
      });

  py::class_<PepRecord>(m, "PepRecord")
      .def_property_readonly("criterion",
                             [](const PepRecord& r) {
                               return std::string(
                                   r.criterion == Criterion::Mmd ? "mmd" : "qn");
                             })
      .def_readonly("snr_db", &PepRecord::snr_db)
      .def_readonly("n_relays", &PepRecord::n_relays)
      .def_readonly("m", &PepRecord::m)
      .def_readonly("slots", &PepRecord::slots)
      .def_readonly("mean_pep", &PepRecord::mean_pep)
      .def_readonly("ci_lo", &PepRecord::ci_lo)
      .def_readonly("ci_hi", &PepRecord::ci_hi)
      .def("__repr__", [](const PepRecord& r) {
        std::ostringstream out;
        out << "PepRecord(" << (r.criterion == Criterion::Mmd ? "mmd" : "qn")
            << ", n=" << r.n_relays << ", " << r.snr_db
            << " dB, mean=" << format_sig(r.mean_pep) << ")";
        return out.str();
      });

  m.def("load_config",
        [](const std::string& path) { return load_config(path); },
        py::arg("path"), "Parse a key = value config file.");
  m.def("run_campaign", &run_campaign, py::arg("config"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "BER Monte Carlo campaign over (variant, snr) cells.");
  m.def(
      "run_pep_campaign",
      [](const std::vector<int>& relay_counts, int m_, const std::string& kind,
         const std::vector<double>& snr_db_grid, int slots, std::uint64_t seed,
         double n0, int workers) {
        PepCampaignConfig cfg;
        cfg.relay_counts = relay_counts;
        cfg.m = m_;
        cfg.constellation = constellation_from_string(kind);
        cfg.snr_db_grid = snr_db_grid;
        cfg.slots = slots;
        cfg.seed = seed;
        cfg.n0 = n0;
        py::gil_scoped_release release;
        return run_pep_campaign(cfg, workers);
      },
      py::arg("relay_counts") = std::vector<int>{3, 5, 10}, py::arg("m") = 2,
      py::arg("constellation") = "bpsk",
      py::arg("snr_db_grid") = std::vector<double>{0, 2, 4, 6, 8, 10, 12},
      py::arg("slots") = 10000, py::arg("seed") = 1, py::arg("n0") = 1.0,
      py::arg("workers") = 0,
      "Mean worst-case PEP of the MMD and QN criteria.");
  m.def(
      "emit_csv",
      [](const std::vector<BerRecord>& records, const std::string& path) {
        emit_csv(records, std::filesystem::path(path));
      },
      py::arg("records"), py::arg("path"));
}
