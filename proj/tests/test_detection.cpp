#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/constellation.hpp"
#include "relaysim/detection.hpp"
#include "relaysim/selection.hpp"

using namespace relaysim;

namespace {

ChannelMatrix random_channel(Rng& rng, int m) {
  ChannelMatrix h = ChannelMatrix::zero(m);
  for (auto& e : h.a) e = rng.next_cgaussian(1.0);
  return h;
}

std::vector<cdouble> transmit(const ChannelMatrix& h, double gain,
                              std::span<const cdouble> x) {
  std::vector<cdouble> y(h.m);
  h.mul(x, y);
  for (auto& v : y) v *= gain;
  return y;
}

}  // namespace

TEST_CASE("noiseless identity channel returns the sent candidate") {
  for (const auto kind : {ConstellationKind::Bpsk, ConstellationKind::Qpsk}) {
    const Constellation c = build_constellation(kind);
    const CandidateSet cands = enumerate_candidates(c, 2);
    const ChannelMatrix h = ChannelMatrix::identity(2);
    for (int k = 0; k < cands.count; ++k) {
      const auto y = transmit(h, 0.5, cands.vec(k));
      const DetectionResult r = ml_detect(y, h, 0.5, cands);
      CHECK(r.index == k);
      CHECK(r.metric == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("noiseless random channels return the sent candidate") {
  const Constellation c = build_constellation(ConstellationKind::Bpsk);
  const CandidateSet cands = enumerate_candidates(c, 2);
  Rng rng(31, 0);
  int trials = 0;
  while (trials < 200) {
    const ChannelMatrix h = random_channel(rng, 2);
    // Skip nearly singular draws: with no noise any invertible channel
    // separates the four candidates.
    double dmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < cands.count; ++a)
      for (int b = a + 1; b < cands.count; ++b)
        dmin = std::min(dmin, pairwise_distance(h, cands.vec(a), cands.vec(b), 1.0));
    if (dmin < 1e-3) continue;
    ++trials;
    for (int k = 0; k < cands.count; ++k) {
      const auto y = transmit(h, 0.7, cands.vec(k));
      CHECK(ml_detect(y, h, 0.7, cands).index == k);
    }
  }
}

TEST_CASE("equidistant candidates break ties to the lowest index") {
  const Constellation c = build_constellation(ConstellationKind::Bpsk);
  const CandidateSet cands = enumerate_candidates(c, 1);
  const ChannelMatrix h = ChannelMatrix::identity(1);
  const std::vector<cdouble> y = {cdouble{0.0, 0.0}};  // equally far from +-1
  const DetectionResult r = ml_detect(y, h, 1.0, cands);
  CHECK(r.index == 0);
}

TEST_CASE("returned metric is the global minimum") {
  for (const auto kind : {ConstellationKind::Bpsk, ConstellationKind::Qpsk}) {
    const Constellation c = build_constellation(kind);
    for (int m = 1; m <= 2; ++m) {
      const CandidateSet cands = enumerate_candidates(c, m);
      Rng rng(47, static_cast<std::uint64_t>(m));
      for (int t = 0; t < 200; ++t) {
        const ChannelMatrix h = random_channel(rng, m);
        std::vector<cdouble> y(m);
        for (auto& v : y) v = rng.next_cgaussian(2.0);
        const double gain = 0.3 + rng.next_double();
        const DetectionResult r = ml_detect(y, h, gain, cands);
        std::vector<cdouble> img(m);
        for (int k = 0; k < cands.count; ++k) {
          h.mul(cands.vec(k), img);
          double d = 0.0;
          for (int i = 0; i < m; ++i) d += std::norm(y[i] - gain * img[i]);
          CHECK(r.metric <= d + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("common positive scaling of received and gain keeps the argmin") {
  const Constellation c = build_constellation(ConstellationKind::Qpsk);
  const CandidateSet cands = enumerate_candidates(c, 2);
  Rng rng(53, 0);
  for (int t = 0; t < 100; ++t) {
    const ChannelMatrix h = random_channel(rng, 2);
    std::vector<cdouble> y(2);
    for (auto& v : y) v = rng.next_cgaussian(2.0);
    const double gain = 0.8;
    const double scale = 0.01 + 10.0 * rng.next_double();
    std::vector<cdouble> ys = y;
    for (auto& v : ys) v *= scale;
    CHECK(ml_detect(y, h, gain, cands).index ==
          ml_detect(ys, h, gain * scale, cands).index);
  }
}

TEST_CASE("vanishing noise gives error-free detection") {
  const Constellation c = build_constellation(ConstellationKind::Bpsk);
  const CandidateSet cands = enumerate_candidates(c, 2);
  const StreamKey root{97, 0};
  int errors = 0;
  for (int t = 0; t < 10000; ++t) {
    const SlotChannels slot = draw_slot_channels(
        root.child(t), 1, 2, CsiModel::make_perfect(), 1.0);
    Rng rng(97, 1000000 + t);
    const int sent = static_cast<int>(rng.next_u32() % cands.count);
    auto y = transmit(slot.sr[0].true_h, 1.0, cands.vec(sent));
    for (auto& v : y) v += rng.next_cgaussian(1e-6);
    errors += ml_detect(y, slot.sr[0].estimated_h, 1.0, cands).index != sent;
  }
  CHECK(errors == 0);
}

TEST_CASE("detector rejects mismatched inputs") {
  const Constellation c = build_constellation(ConstellationKind::Bpsk);
  const CandidateSet cands = enumerate_candidates(c, 2);
  const ChannelMatrix h = ChannelMatrix::identity(3);
  CHECK_THROWS_AS(MlDetector(h, 1.0, cands), std::invalid_argument);
  CHECK_THROWS_AS(MlDetector(ChannelMatrix::identity(2), 0.0, cands),
                  std::invalid_argument);
}
