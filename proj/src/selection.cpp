#include "relaysim/selection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaysim {

namespace {

/// Shared metric kernel: || gain * H * e ||^2. Both the pairwise route and
/// the difference-vector route go through here so they agree bit for bit.
double scaled_image_norm_sq(const ChannelMatrix& h, std::span<const cdouble> e,
                            double gain) {
  double s = 0.0;
  for (int r = 0; r < h.m; ++r) {
    cdouble acc{0.0, 0.0};
    const cdouble* row = h.a.data() + static_cast<std::size_t>(r) * h.m;
    for (int c = 0; c < h.m; ++c) acc += row[c] * e[c];
    s += std::norm(acc);
  }
  return gain * gain * s;
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Direct:
      return "direct";
    case Mode::Reception:
      return "reception";
    case Mode::Transmission:
      return "transmission";
  }
  return "?";
}

double cooperative_gain(double es, int m) { return std::sqrt(es / m); }
double direct_gain(double es, int m) { return std::sqrt(2.0 * es / m); }

double pairwise_distance(const ChannelMatrix& h, std::span<const cdouble> x_l,
                         std::span<const cdouble> x_n, double gain) {
  std::vector<cdouble> e(x_l.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = x_l[i] - x_n[i];
  return scaled_image_norm_sq(h, e, gain);
}

DifferenceVectors enumerate_difference_vectors(const DifferenceSet& ds, int m) {
  if (m < 1) throw std::invalid_argument("antenna count must be >= 1");
  std::vector<cdouble> signed_values;
  signed_values.reserve(2 * ds.values.size());
  for (const cdouble& v : ds.values) {
    signed_values.push_back(v);
    signed_values.push_back(-v);
  }

  DifferenceVectors out;
  out.m = m;
  std::vector<cdouble> current(m);
  // Support subsets encoded as bit masks; within a subset the lowest set
  // antenna takes a canonical value, the rest take signed values.
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> support;
    for (int a = 0; a < m; ++a)
      if (mask & (1 << a)) support.push_back(a);
    const int k = static_cast<int>(support.size());
    std::size_t combos = ds.values.size();
    for (int i = 1; i < k; ++i) combos *= signed_values.size();
    for (std::size_t c = 0; c < combos; ++c) {
      std::fill(current.begin(), current.end(), cdouble{0.0, 0.0});
      std::size_t rest = c;
      current[support[0]] = ds.values[rest % ds.values.size()];
      rest /= ds.values.size();
      for (int i = 1; i < k; ++i) {
        current[support[i]] = signed_values[rest % signed_values.size()];
        rest /= signed_values.size();
      }
      out.flat.insert(out.flat.end(), current.begin(), current.end());
      ++out.count;
    }
  }
  return out;
}

double min_distance(const ChannelMatrix& estimated_h,
                    const DifferenceVectors& diffs, double gain,
                    std::uint64_t* metric_evals) {
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t evals = 0;
  for (int k = 0; k < diffs.count; ++k) {
    const double d = scaled_image_norm_sq(estimated_h, diffs.vec(k), gain);
    ++evals;
    if (d < best) best = d;
  }
  if (metric_evals) *metric_evals = evals;
  return best;
}

double qn_metric(const ChannelMatrix& estimated_h) {
  return estimated_h.frobenius_sq();
}

SlotDecision decide_slot(const SlotChannels& channels,
                         std::span<const RelayAvailability> availability,
                         Criterion criterion, ProtocolKind protocol, double es,
                         const DifferenceVectors& diffs) {
  const int n = channels.n;
  if (static_cast<int>(availability.size()) != n)
    throw std::invalid_argument("availability size mismatch");

  const double g_coop = cooperative_gain(es, channels.m);
  const double g_direct = direct_gain(es, channels.m);

  SlotDecision decision;
  decision.metrics.reserve(2 * n + 1);
  for (int i = 0; i < n; ++i)
    decision.metrics.push_back(
        {LinkKind::SourceRelay, i,
         min_distance(channels.sr[i].estimated_h, diffs, g_coop),
         qn_metric(channels.sr[i].estimated_h), availability[i].can_receive});
  for (int i = 0; i < n; ++i)
    decision.metrics.push_back(
        {LinkKind::RelayDestination, i,
         min_distance(channels.rd[i].estimated_h, diffs, g_coop),
         qn_metric(channels.rd[i].estimated_h), availability[i].can_transmit});
  decision.metrics.push_back(
      {LinkKind::SourceDestination, -1,
       min_distance(channels.sd.estimated_h, diffs, g_direct),
       qn_metric(channels.sd.estimated_h), true});

  const auto key = [criterion](const LinkMetric& lm) {
    return criterion == Criterion::Mmd ? lm.min_distance : lm.quad_norm;
  };
  const LinkMetric& sd = decision.metrics.back();

  if (protocol == ProtocolKind::DirectOnly) {
    decision.mode = Mode::Direct;
    decision.winning_metric = key(sd);
    return decision;
  }

  // Max-Link winner over the eligible cooperative links. Scanning relay by
  // relay with SR first and keeping strict improvements realizes the
  // tie-break order.
  int best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const LinkMetric& srm = decision.metrics[i];
    const LinkMetric& rdm = decision.metrics[n + i];
    if (srm.eligible && key(srm) > best_val) {
      best = i;
      best_val = key(srm);
    }
    if (rdm.eligible && key(rdm) > best_val) {
      best = n + i;
      best_val = key(rdm);
    }
  }

  if (best < 0) {
    if (protocol == ProtocolKind::MaxLinkOnly)
      throw StallError("no eligible relay link: all buffers block both reception and transmission");
    decision.mode = Mode::Direct;
    decision.winning_metric = key(sd);
    return decision;
  }

  if (protocol == ProtocolKind::SwitchedMaxLink && key(sd) >= best_val) {
    decision.mode = Mode::Direct;
    decision.winning_metric = key(sd);
    return decision;
  }

  decision.mode = best < n ? Mode::Reception : Mode::Transmission;
  decision.relay = best < n ? best : best - n;
  decision.winning_metric = best_val;
  return decision;
}

}  // namespace relaysim
