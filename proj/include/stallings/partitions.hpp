#pragma once

// Set partitions of {0, ..., n-1} as restricted growth strings.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace stallings {

// Bell(n), saturating at `cap + 1` so that callers can compare against a cap
// without overflow.
inline unsigned long long bell_number(std::size_t n, unsigned long long cap) {
  unsigned long long const sat = cap == std::numeric_limits<unsigned long long>::max()
                                     ? cap
                                     : cap + 1;
  // Bell triangle; one row at a time.
  std::vector<unsigned long long> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<unsigned long long> next{row.back()};
    for (unsigned long long x : row) {
      unsigned long long y = next.back() + x;
      if (y < x || y > sat) y = sat;
      next.push_back(y);
    }
    row = std::move(next);
  }
  return row.front() > sat ? sat : row.front();
}

// Visits every partition of an n-set once, as block indices a_0 = 0 and
// a_i <= 1 + max(a_0, ..., a_{i-1}). The first is discrete, the last full.
template <class Visit>
void for_each_partition(std::size_t n, Visit&& visit) {
  if (n == 0) {
    visit(std::vector<std::size_t>{});
    return;
  }
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = i;
  // Decreasing lexicographic order: decrement the rightmost non-zero entry,
  // then make the tail as large as allowed.
  while (true) {
    visit(a);
    std::size_t i = n - 1;
    while (i > 0 && a[i] == 0) --i;
    if (i == 0) return;
    --a[i];
    std::size_t mx = *std::max_element(a.begin(), a.begin() + static_cast<long>(i) + 1);
    for (std::size_t k = i + 1; k < n; ++k) a[k] = ++mx;
  }
}

}  // namespace stallings
