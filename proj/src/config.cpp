#include "relaysim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace relaysim {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::MmdSwitched:
      return "mmd-switched";
    case Variant::MmdMaxLink:
      return "mmd-maxlink";
    case Variant::QnMaxLink:
      return "qn-maxlink";
    case Variant::MimoDirect:
      return "mimo-direct";
  }
  return "?";
}

Variant variant_from_string(std::string_view name) {
  if (name == "mmd-switched") return Variant::MmdSwitched;
  if (name == "mmd-maxlink") return Variant::MmdMaxLink;
  if (name == "qn-maxlink") return Variant::QnMaxLink;
  if (name == "mimo-direct") return Variant::MimoDirect;
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected mmd-switched, mmd-maxlink, qn-maxlink or mimo-direct)");
}

Criterion criterion_of(Variant v) {
  return v == Variant::QnMaxLink ? Criterion::Qn : Criterion::Mmd;
}

ProtocolKind protocol_of(Variant v) {
  switch (v) {
    case Variant::MmdSwitched:
      return ProtocolKind::SwitchedMaxLink;
    case Variant::MmdMaxLink:
    case Variant::QnMaxLink:
      return ProtocolKind::MaxLinkOnly;
    case Variant::MimoDirect:
      return ProtocolKind::DirectOnly;
  }
  return ProtocolKind::DirectOnly;
}

std::uint64_t variant_id(Variant v) { return static_cast<std::uint64_t>(v) + 1; }

void ExperimentConfig::validate() const {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (j < 2 * m) throw ConfigError("j must be >= 2*m");
  if ((j / 2) % m != 0)
    throw ConfigError("floor(j/2) must be a multiple of m");
  if (snr_db_grid.empty()) throw ConfigError("snr grid must not be empty");
  if (packets < 1) throw ConfigError("packets must be >= 1");
  if (symbols_per_packet < 1) throw ConfigError("symbols_per_packet must be >= 1");
  if (variants.empty()) throw ConfigError("variants must not be empty");
  if (n0 <= 0.0) throw ConfigError("n0 must be positive");
  if (!csi.perfect) CsiModel::make_imperfect(csi.beta, csi.alpha);  // range check
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number '" + s + "' for " + what);
  }
}

long long to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer '" + s + "' for " + what);
  }
}

}  // namespace

std::vector<double> parse_double_grid(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty value grid");
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("range syntax is start:step:stop");
    const double start = to_double(parts[0], "grid start");
    const double step = to_double(parts[1], "grid step");
    const double stop = to_double(parts[2], "grid stop");
    if (step <= 0.0) throw ConfigError("grid step must be positive");
    std::vector<double> grid;
    for (double v = start; v <= stop + step * 1e-9; v += step) grid.push_back(v);
    if (grid.empty()) throw ConfigError("empty grid range");
    return grid;
  }
  std::vector<double> grid;
  for (const std::string& p : split(t, ','))
    grid.push_back(to_double(p, "grid value"));
  return grid;
}

std::vector<int> parse_int_list(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty integer list");
  const std::size_t dots = t.find("..");
  if (dots != std::string::npos) {
    const long long lo = to_int(trim(t.substr(0, dots)), "range start");
    const long long hi = to_int(trim(t.substr(dots + 2)), "range stop");
    if (hi < lo) throw ConfigError("range stop is below start");
    std::vector<int> out;
    for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    return out;
  }
  std::vector<int> out;
  for (const std::string& p : split(t, ','))
    out.push_back(static_cast<int>(to_int(p, "list value")));
  return out;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  bool csi_imperfect = false;
  double beta = 0.0;
  double alpha = 0.0;
  bool have_beta = false;
  bool have_alpha = false;

  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;

    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": expected key = value");
    if (!seen.insert(key).second)
      throw ConfigError(source_name + ": duplicate key '" + key + "'");

    if (key == "n") {
      cfg.n = static_cast<int>(to_int(value, key));
    } else if (key == "m") {
      cfg.m = static_cast<int>(to_int(value, key));
    } else if (key == "j") {
      cfg.j = static_cast<int>(to_int(value, key));
    } else if (key == "constellation") {
      cfg.constellation = constellation_from_string(value);
    } else if (key == "snr_db") {
      cfg.snr_db_grid = parse_double_grid(value);
    } else if (key == "packets") {
      cfg.packets = static_cast<int>(to_int(value, key));
    } else if (key == "symbols_per_packet") {
      cfg.symbols_per_packet = static_cast<int>(to_int(value, key));
    } else if (key == "csi") {
      if (value == "perfect")
        csi_imperfect = false;
      else if (value == "imperfect")
        csi_imperfect = true;
      else
        throw ConfigError(source_name + ": csi must be perfect or imperfect");
    } else if (key == "beta") {
      beta = to_double(value, key);
      have_beta = true;
    } else if (key == "alpha") {
      alpha = to_double(value, key);
      have_alpha = true;
    } else if (key == "variants") {
      cfg.variants.clear();
      for (const std::string& p : split(value, ','))
        cfg.variants.push_back(variant_from_string(p));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
    } else if (key == "n0") {
      cfg.n0 = to_double(value, key);
    } else {
      throw ConfigError(source_name + ": unknown key '" + key + "'");
    }
  }

  if (csi_imperfect) {
    cfg.csi = CsiModel::make_imperfect(have_beta ? beta : 0.0,
                                       have_alpha ? alpha : 0.0);
  } else {
    cfg.csi = CsiModel::make_perfect();
    if (have_beta || have_alpha) {
      // beta/alpha are accepted but inert under perfect CSI; keep them so a
      // preset can flip csi without re-stating them.
      cfg.csi.beta = beta;
      cfg.csi.alpha = alpha;
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.filename().string());
}

}  // namespace relaysim
