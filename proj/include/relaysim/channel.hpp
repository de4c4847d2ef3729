#pragma once

#include <span>
#include <vector>

#include "relaysim/rng.hpp"
#include "relaysim/types.hpp"

namespace relaysim {

/// Square complex gain matrix for one link set in one time slot, row-major.
struct ChannelMatrix {
  int m = 0;
  std::vector<cdouble> a;

  static ChannelMatrix zero(int m) {
    return {m, std::vector<cdouble>(static_cast<std::size_t>(m) * m)};
  }
  static ChannelMatrix identity(int m);

  cdouble& at(int r, int c) { return a[static_cast<std::size_t>(r) * m + c]; }
  const cdouble& at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * m + c];
  }

  /// out = A * x
  void mul(std::span<const cdouble> x, std::span<cdouble> out) const;
  double frobenius_sq() const;
};

/// Receiver-side channel knowledge. Under perfect CSI the estimate aliases
/// the true matrix; under imperfect CSI it is true + error with the error
/// entries i.i.d. complex Gaussian of variance sigma_e_sq.
struct LinkEstimate {
  ChannelMatrix true_h;
  ChannelMatrix estimated_h;
  double sigma_e_sq = 0.0;
};

struct SlotChannels {
  int n = 0;
  int m = 0;
  std::vector<LinkEstimate> sr;  // one per relay
  std::vector<LinkEstimate> rd;  // one per relay
  LinkEstimate sd;
};

struct CsiModel {
  bool perfect = true;
  double beta = 0.0;
  double alpha = 0.0;

  static CsiModel make_perfect() { return {}; }
  static CsiModel make_imperfect(double beta, double alpha);

  /// Estimation error variance for the given transmit energy. Direct SD
  /// links see twice the energy, hence the 2*es argument there.
  double error_variance(double es, bool direct_link) const;
};

/// Draws all 2n+1 link sets of one slot. Every link draws from its own
/// derived substream, so realized channels do not depend on evaluation
/// order. True entries are unit-variance complex Gaussian.
SlotChannels draw_slot_channels(const StreamKey& slot_key, int n, int m,
                                const CsiModel& csi, double es);

/// i.i.d. complex AWGN, per-entry variance n0. Requires n0 > 0.
std::vector<cdouble> draw_noise(Rng& rng, int m, double n0);

}  // namespace relaysim
