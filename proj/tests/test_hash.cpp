#include "skewsim/hash.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

using namespace skewsim;

// Vectors from an independent MurmurHash3_x64_128 implementation (first
// 64-bit word, key as 8 little-endian bytes).
TEST(Murmur3, KnownVectors) {
    EXPECT_EQ(murmur3_64(0, 0), 0x28df63b7cc57c3cbULL);
    EXPECT_EQ(murmur3_64(1, 0), 0x4403b7fb05c44aULL);
    EXPECT_EQ(murmur3_64(0x13, 42), 0xe8a76ca3ebf53014ULL);
    EXPECT_EQ(murmur3_64(123456789, 7), 0x10ebe0e9b8fd6b28ULL);
}

TEST(Murmur3, SeedChangesOutput) {
    EXPECT_NE(murmur3_64(5, 0), murmur3_64(5, 1));
}

TEST(Mix64, IsInjectiveOnSmallRange) {
    std::vector<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 4096; ++i) seen.push_back(mix64(i));
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
}
