#include "relaysim/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaysim {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double pep_worst_case(double d_prime_min, double es, double n0, int m,
                      PepMode mode) {
  if (d_prime_min < 0.0) throw std::invalid_argument("d'_min must be >= 0");
  if (es <= 0.0 || n0 <= 0.0 || m < 1)
    throw std::invalid_argument("es, n0 must be positive and m >= 1");
  const double q = q_function(std::sqrt(es * d_prime_min / (2.0 * n0 * m)));
  if (mode == PepMode::Direct) return q;
  return 1.0 - (1.0 - q) * (1.0 - q);
}

double d_prime_from_min_distance(double min_distance, double es, int m) {
  return min_distance * m / es;
}

std::pair<double, double> mmd_vs_qn_pep(
    const SlotChannels& channels, const DifferenceVectors& diffs, double es,
    double n0, std::span<const RelayAvailability> availability) {
  const int n = channels.n;
  const double g_coop = cooperative_gain(es, channels.m);

  const auto eligible = [&](int relay, bool receive) {
    if (availability.empty()) return true;
    return receive ? availability[relay].can_receive
                   : availability[relay].can_transmit;
  };

  double best_mmd = -std::numeric_limits<double>::infinity();
  double best_qn = -std::numeric_limits<double>::infinity();
  double qn_winner_dmin = 0.0;
  bool any = false;
  for (int side = 0; side < 2; ++side) {
    for (int i = 0; i < n; ++i) {
      // Strict maxima over the same scan order as decide_slot, so ties
      // resolve identically for both criteria.
      const bool receive = side == 0;
      if (!eligible(i, receive)) continue;
      const LinkEstimate& link = receive ? channels.sr[i] : channels.rd[i];
      const double dmin = min_distance(link.estimated_h, diffs, g_coop);
      const double qn = qn_metric(link.estimated_h);
      if (dmin > best_mmd) best_mmd = dmin;
      if (qn > best_qn) {
        best_qn = qn;
        qn_winner_dmin = dmin;
      }
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("no eligible cooperative link");

  const double dp_mmd = d_prime_from_min_distance(best_mmd, es, channels.m);
  const double dp_qn = d_prime_from_min_distance(qn_winner_dmin, es, channels.m);
  return {pep_worst_case(dp_mmd, es, n0, channels.m, PepMode::Cooperative),
          pep_worst_case(dp_qn, es, n0, channels.m, PepMode::Cooperative)};
}

namespace {

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::uint64_t mmd_metric_evals(int m, int w) {
  if (m < 1 || w < 1) throw std::invalid_argument("need m >= 1 and w >= 1");
  std::uint64_t total = 0;
  std::uint64_t w_pow = 1;
  for (int i = 1; i <= m; ++i) {
    w_pow *= static_cast<std::uint64_t>(w);
    total += (std::uint64_t{1} << (i - 1)) * w_pow * binomial(m, i);
  }
  return total;
}

MmdOpCount mmd_op_count(int n, int m, int w) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  const std::uint64_t x = mmd_metric_evals(m, w);
  MmdOpCount c;
  c.metric_evals = x;
  c.additions = 2ull * n * m * (x - 1);
  c.multiplications = 2ull * n * m * x;
  return c;
}

QnOpCount qn_op_count(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  QnOpCount c;
  c.additions = 2ull * n * (static_cast<std::uint64_t>(m) * m - 1);
  c.multiplications = 2ull * n * static_cast<std::uint64_t>(m) * m;
  return c;
}

}  // namespace relaysim
