#include <gtest/gtest.h>

#include "oracles.h"
#include "radmine/hash.h"
#include "radmine/rng.h"
#include "testing.h"

namespace radmine {
namespace {

TEST(Fnv1a64, PublishedVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Fnv1a64, MatchesShiftAddOracle) {
  testing::Gen gen(7);
  for (int i = 0; i < 500; ++i) {
    std::string s = gen.messy_text();
    ASSERT_EQ(fnv1a64(s), oracle::fnv1a64(s)) << s;
  }
}

TEST(Fnv1a64, ChainingEqualsConcatenation) {
  EXPECT_EQ(fnv1a64("world", fnv1a64("hello ")), fnv1a64("hello world"));
}

TEST(Fnv1a64, ByteSpanOverloadAgrees) {
  std::string s = "pleural effusion";
  std::vector<uint8_t> bytes(s.begin(), s.end());
  EXPECT_EQ(fnv1a64(std::span<const uint8_t>(bytes)), fnv1a64(s));
}

TEST(Hex64, SixteenLowercaseDigits) {
  EXPECT_EQ(hex64(0), "0000000000000000");
  EXPECT_EQ(hex64(0xcbf29ce484222325ULL), "cbf29ce484222325");
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(1);
  for (uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL}) {
    for (int i = 0; i < 200; ++i) EXPECT_LT(rng.below(bound), bound);
  }
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  rng.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NE(v, sorted);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace radmine
