#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "stallings/partitions.hpp"

namespace stallings {
namespace {

// Bell(n) as a sum of Stirling numbers of the second kind.
unsigned long long bell_by_stirling(std::size_t n) {
  std::vector<std::vector<unsigned long long>> s(n + 1,
                                                 std::vector<unsigned long long>(n + 1, 0));
  s[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = 1; k <= i; ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
  }
  unsigned long long total = 0;
  for (std::size_t k = 0; k <= n; ++k) total += s[n][k];
  return total;
}

TEST(Bell, MatchesStirlingSums) {
  for (std::size_t n = 0; n <= 20; ++n) {
    EXPECT_EQ(bell_number(n, ~0ull), bell_by_stirling(n)) << n;
  }
  EXPECT_EQ(bell_number(7, 1000000), 877u);
}

TEST(Bell, SaturatesAboveTheCap) {
  EXPECT_EQ(bell_number(30, 1000), 1001u);
  EXPECT_EQ(bell_number(200, 1000000), 1000001u);
  EXPECT_EQ(bell_number(5, 52), 52u);
  EXPECT_EQ(bell_number(5, 51), 52u);
}

TEST(Partitions, EachOnceInDecreasingOrder) {
  for (std::size_t n = 0; n <= 8; ++n) {
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<std::size_t>> order;
    for_each_partition(n, [&](std::vector<std::size_t> const& a) {
      order.push_back(a);
      seen.insert(a);
    });
    ASSERT_EQ(order.size(), bell_by_stirling(n)) << n;
    ASSERT_EQ(seen.size(), order.size());
    for (std::size_t i = 1; i < order.size(); ++i) ASSERT_GT(order[i - 1], order[i]);
    for (auto const& a : order) {
      std::size_t mx = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_LE(a[i], i == 0 ? 0 : mx + 1);
        mx = std::max(mx, a[i]);
      }
    }
    if (n > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(order.front()[i], i);
        EXPECT_EQ(order.back()[i], 0u);
      }
    }
  }
}

}  // namespace
}  // namespace stallings
