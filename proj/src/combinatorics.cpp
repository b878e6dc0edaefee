#include "bomp/combinatorics.hpp"

#include <limits>

#include "bomp/errors.hpp"

namespace bomp {

std::uint64_t binomial(int m, int k) {
  if (k < 0 || m < 0 || k > m) {
    return 0;
  }
  if (k > m - k) {
    k = m - k;
  }
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const auto factor = static_cast<std::uint64_t>(m - k + i);
    if (result > kMax / factor) {
      return kMax;
    }
    // exact at every step: result holds C(m-k+i-1, i-1) * factor before the
    // division, and i divides that product
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<int> first_combination(int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    c[static_cast<std::size_t>(i)] = i + 1;
  }
  return c;
}

bool next_combination(std::vector<int>& c, int m) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[static_cast<std::size_t>(i)] < m - (k - 1 - i)) {
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

std::vector<int> combination_at_rank(int m, int k, std::uint64_t rank) {
  if (k < 0 || k > m) {
    throw IndexOutOfRange("combination size outside 0..m");
  }
  if (rank >= binomial(m, k)) {
    throw IndexOutOfRange("combination rank out of range");
  }
  std::vector<int> c;
  c.reserve(static_cast<std::size_t>(k));
  int value = 1;
  for (int i = 0; i < k; ++i) {
    for (;; ++value) {
      // combinations starting with `value` at slot i: choose the remaining
      // k-i-1 values from the m-value elements above it
      const std::uint64_t count = binomial(m - value, k - i - 1);
      if (rank < count) {
        break;
      }
      rank -= count;
    }
    c.push_back(value);
    ++value;
  }
  return c;
}

}  // namespace bomp
