#pragma once

#include <cstdint>
#include <vector>

namespace bomp {

/// C(m, k); saturates at UINT64_MAX instead of overflowing.
std::uint64_t binomial(int m, int k);

/// {1, 2, .., k}, the lexicographically first k-combination.
std::vector<int> first_combination(int k);

/// Advances c (1-based, strictly ascending, values <= m) to its lexicographic
/// successor; returns false once c was the last combination.
bool next_combination(std::vector<int>& c, int m);

/// The rank-th k-combination of {1..m} in lexicographic order, rank 0-based.
std::vector<int> combination_at_rank(int m, int k, std::uint64_t rank);

}  // namespace bomp
