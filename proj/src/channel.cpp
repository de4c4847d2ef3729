#include "relaysim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace relaysim {

namespace {

// Per-slot stream layout: link ordinal 0..n-1 = SR, n..2n-1 = RD, 2n = SD.
constexpr std::uint64_t kLinkBase = 0x10;

ChannelMatrix draw_matrix(Rng& rng, int m, double variance) {
  ChannelMatrix h = ChannelMatrix::zero(m);
  for (auto& e : h.a) e = rng.next_cgaussian(variance);
  return h;
}

LinkEstimate draw_link(const StreamKey& key, int m, double sigma_e_sq) {
  Rng rng = key.rng();
  LinkEstimate link;
  link.true_h = draw_matrix(rng, m, 1.0);
  link.sigma_e_sq = sigma_e_sq;
  if (sigma_e_sq > 0.0) {
    const ChannelMatrix err = draw_matrix(rng, m, sigma_e_sq);
    link.estimated_h = link.true_h;
    for (std::size_t i = 0; i < link.estimated_h.a.size(); ++i)
      link.estimated_h.a[i] += err.a[i];
  } else {
    link.estimated_h = link.true_h;
  }
  return link;
}

}  // namespace

ChannelMatrix ChannelMatrix::identity(int m) {
  ChannelMatrix h = zero(m);
  for (int i = 0; i < m; ++i) h.at(i, i) = 1.0;
  return h;
}

void ChannelMatrix::mul(std::span<const cdouble> x,
                        std::span<cdouble> out) const {
  for (int r = 0; r < m; ++r) {
    cdouble acc{0.0, 0.0};
    const cdouble* row = a.data() + static_cast<std::size_t>(r) * m;
    for (int c = 0; c < m; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

double ChannelMatrix::frobenius_sq() const {
  double s = 0.0;
  for (const cdouble& e : a) s += std::norm(e);
  return s;
}

CsiModel CsiModel::make_imperfect(double beta, double alpha) {
  if (beta < 0.0) throw ConfigError("csi beta must be >= 0");
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("csi alpha must be in [0, 1]");
  CsiModel csi;
  csi.perfect = false;
  csi.beta = beta;
  csi.alpha = alpha;
  return csi;
}

double CsiModel::error_variance(double es, bool direct_link) const {
  if (perfect) return 0.0;
  return beta * std::pow(direct_link ? 2.0 * es : es, -alpha);
}

SlotChannels draw_slot_channels(const StreamKey& slot_key, int n, int m,
                                const CsiModel& csi, double es) {
  if (n < 1 || m < 1) throw ConfigError("need n >= 1 relays and m >= 1 antennas");
  if (es <= 0.0) throw ConfigError("symbol energy must be positive");

  const double coop_var = csi.error_variance(es, /*direct_link=*/false);
  const double direct_var = csi.error_variance(es, /*direct_link=*/true);

  SlotChannels slot;
  slot.n = n;
  slot.m = m;
  slot.sr.reserve(n);
  slot.rd.reserve(n);
  for (int i = 0; i < n; ++i)
    slot.sr.push_back(draw_link(slot_key.child(kLinkBase + i), m, coop_var));
  for (int i = 0; i < n; ++i)
    slot.rd.push_back(draw_link(slot_key.child(kLinkBase + n + i), m, coop_var));
  slot.sd = draw_link(slot_key.child(kLinkBase + 2 * n), m, direct_var);
  return slot;
}

std::vector<cdouble> draw_noise(Rng& rng, int m, double n0) {
  if (n0 <= 0.0) throw std::invalid_argument("noise variance must be positive");
  std::vector<cdouble> noise(m);
  for (auto& e : noise) e = rng.next_cgaussian(n0);
  return noise;
}

}  // namespace relaysim
