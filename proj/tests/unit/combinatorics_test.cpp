#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

using namespace resest;

namespace {

std::vector<std::vector<int>> members(const std::vector<SubsetIndex>& v) {
    std::vector<std::vector<int>> out;
    for (const auto& s : v) out.push_back(s.members());
    return out;
}

/// Reference: all subsets of {1..p} of the given size via bitmasks, sorted.
std::vector<std::vector<int>> brute_subsets(int p, int size) {
    std::vector<std::vector<int>> out;
    for (unsigned m = 0; m < (1u << p); ++m) {
        if (__builtin_popcount(m) != size) continue;
        std::vector<int> v;
        for (int i = 0; i < p; ++i)
            if (m & (1u << i)) v.push_back(i + 1);
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(EnumerateSubsets, ThreeChooseTwo) {
    EXPECT_EQ(members(enumerate_subsets(3, 2)), (std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}}));
}

TEST(EnumerateSubsets, FiveSensorsCounts) {
    EXPECT_EQ(enumerate_subsets(5, 3).size(), 10u);
    EXPECT_EQ(enumerate_subsets(5, 1).size(), 5u);
}

TEST(EnumerateSubsets, FourSensorsCounts) {
    EXPECT_EQ(enumerate_subsets(4, 3).size(), 4u);
    EXPECT_EQ(enumerate_subsets(4, 2).size(), 6u);
}

TEST(EnumerateSubsets, OutOfRangeSizeIsConfigError) {
    EXPECT_THROW(enumerate_subsets(3, 0), ConfigError);
    EXPECT_THROW(enumerate_subsets(3, 4), ConfigError);
}

TEST(EnumerateSubsets, MatchesBitmaskReferenceForAllSmallCases) {
    for (int p = 1; p <= 9; ++p)
        for (int s = 1; s <= p; ++s) EXPECT_EQ(members(enumerate_subsets(p, s)), brute_subsets(p, s)) << p << " " << s;
}

TEST(BankIndex, ThreeSensorsOneAttack) {
    const auto b = bank_index(3, 1);
    EXPECT_EQ(b.J_list.size(), 3u);
    EXPECT_EQ(b.S_list.size(), 3u);
    EXPECT_EQ(b.observer_count(), 6u);
    // J = {1,2} holds S = {1} and {2}
    ASSERT_EQ(b.contained[0].size(), 2u);
    EXPECT_EQ(b.S_list[b.contained[0][0]].members(), std::vector<int>{1});
    EXPECT_EQ(b.S_list[b.contained[0][1]].members(), std::vector<int>{2});
}

TEST(BankIndex, FourSensorsContainmentMatchesBruteForce) {
    const auto b = bank_index(4, 1);
    for (std::size_t j = 0; j < b.J_list.size(); ++j) {
        EXPECT_EQ(b.contained[j].size(), 3u);
        std::set<std::vector<int>> expected;
        for (const auto& s : brute_subsets(4, 2))
            if (std::includes(b.J_list[j].members().begin(), b.J_list[j].members().end(), s.begin(), s.end()))
                expected.insert(s);
        std::set<std::vector<int>> got;
        for (auto s : b.contained[j]) got.insert(b.S_list[s].members());
        EXPECT_EQ(got, expected);
    }
}

TEST(BankIndex, RedundancyBoundaryIsAssumptionViolated) {
    EXPECT_THROW(bank_index(2, 1), AssumptionViolated);
    EXPECT_THROW(bank_index(3, 2), AssumptionViolated);
}

TEST(BankIndex, Property_ContainmentIsExactAndCovering) {
    RngStream g(42, "bank");
    for (int c = 0; c < 1000; ++c) {
        const int p = 1 + static_cast<int>(g.open_unit() * 9);
        const int qmax = (p - 1) / 2;
        const int q = static_cast<int>(g.open_unit() * (qmax + 1));
        const auto b = bank_index(p, q);
        ASSERT_EQ(static_cast<long long>(b.J_list.size()), binomial(p, p - q));
        ASSERT_EQ(static_cast<long long>(b.S_list.size()), binomial(p, p - 2 * q));
        std::vector<bool> covered(b.S_list.size(), false);
        for (std::size_t j = 0; j < b.J_list.size(); ++j) {
            ASSERT_EQ(static_cast<long long>(b.contained[j].size()), binomial(p - q, p - 2 * q));
            for (std::size_t s = 0; s < b.S_list.size(); ++s) {
                const bool inside = std::find(b.contained[j].begin(), b.contained[j].end(), s) != b.contained[j].end();
                ASSERT_EQ(inside, b.S_list[s].is_subset_of(b.J_list[j]));
                if (inside) covered[s] = true;
            }
            if (j > 0) {
                ASSERT_TRUE(b.J_list[j - 1] < b.J_list[j]);
            }
        }
        for (bool cov : covered) ASSERT_TRUE(cov);
    }
}

TEST(SubsetIndex, KeysRoundTrip) {
    const SubsetIndex j({1, 3, 4}, SubsetClass::J);
    EXPECT_EQ(j.key(), "J:1,3,4");
    EXPECT_EQ(parse_subset_key("J:1,3,4"), j);
    EXPECT_EQ(parse_subset_key("S:2").key(), "S:2");
    EXPECT_THROW(parse_subset_key("J:3,1"), ConfigError);
    EXPECT_THROW(parse_subset_key("X:1"), ConfigError);
    EXPECT_THROW(parse_subset_key("J:1,,2"), ConfigError);
}

TEST(SubsetIndex, MembersMustIncrease) {
    EXPECT_THROW(SubsetIndex({2, 2}), ConfigError);
    EXPECT_THROW(SubsetIndex({0, 1}), ConfigError);
}
