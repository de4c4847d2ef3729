#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "relaysim/rng.hpp"

using namespace relaysim;

// Published Philox4x32-10 vectors (Random123 known-answer tests).
TEST_CASE("philox block matches reference vectors") {
  {
    const std::uint32_t ctr[4] = {0, 0, 0, 0};
    const std::uint32_t key[2] = {0, 0};
    std::uint32_t out[4];
    philox4x32_10(ctr, key, out);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const std::uint32_t ctr[4] = {0xffffffffu, 0xffffffffu, 0xffffffffu,
                                  0xffffffffu};
    const std::uint32_t key[2] = {0xffffffffu, 0xffffffffu};
    std::uint32_t out[4];
    philox4x32_10(ctr, key, out);
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    const std::uint32_t ctr[4] = {0x243f6a88u, 0x85a308d3u, 0x13198a2eu,
                                  0x03707344u};
    const std::uint32_t key[2] = {0xa4093822u, 0x299f31d0u};
    std::uint32_t out[4];
    philox4x32_10(ctr, key, out);
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("same seed and stream reproduce the sequence") {
  Rng a(42, 7);
  Rng b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams decorrelate") {
  Rng a(42, 1);
  Rng b(42, 2);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next_u32() == b.next_u32();
  CHECK(equal < 5);
}

TEST_CASE("child keys differ along the derivation tree") {
  const StreamKey root{123, 0};
  std::set<std::uint64_t> ids;
  for (std::uint64_t t = 0; t < 100; ++t) {
    ids.insert(root.child(t).id);
    ids.insert(root.child(t).child(t).id);
  }
  CHECK(ids.size() == 200);
}

TEST_CASE("uniform doubles stay in [0,1) with sane mean") {
  Rng rng(9, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
}

TEST_CASE("gaussian moments") {
  Rng rng(11, 0);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("complex gaussian splits the variance evenly") {
  Rng rng(13, 0);
  const int n = 200000;
  double re_sq = 0.0, im_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.next_cgaussian(2.0);
    re_sq += z.real() * z.real();
    im_sq += z.imag() * z.imag();
  }
  CHECK(re_sq / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(im_sq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("bits are roughly balanced") {
  Rng rng(17, 0);
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += rng.next_bit();
  CHECK(std::abs(ones - n / 2) < 1000);
}
