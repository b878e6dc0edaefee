#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bomp/numeric.hpp"

namespace bomp {

/// Partition of {1..N} into M contiguous blocks of uniform length d, N = M*d.
struct BlockLayout {
  int n = 0;  // signal length
  int d = 0;  // block length
  int m = 0;  // block count

  /// Throws LayoutMismatch unless d >= 1 and d divides n.
  static BlockLayout create(int n, int d);

  /// Degenerate layout with unit blocks (d = 1, M = N).
  static BlockLayout scalar(int n) { return BlockLayout{n, 1, n}; }

  bool operator==(const BlockLayout&) const = default;
};

/// Ordered set of block indices; 1-based, strictly increasing.
struct BlockSupport {
  BlockLayout layout;
  std::vector<int> indices;

  /// Validates range and strict ordering; accepts any order, stores sorted.
  static BlockSupport create(const BlockLayout& layout, std::vector<int> indices);
  static BlockSupport empty(const BlockLayout& layout) { return BlockSupport{layout, {}}; }

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int block) const;
  BlockSupport complement() const;
  std::string to_string() const;

  bool operator==(const BlockSupport&) const = default;
};

/// A length-N signal together with its block partition.
struct BlockSignal {
  BlockLayout layout;
  Vector values;

  static BlockSignal zero(const BlockLayout& layout) {
    return BlockSignal{layout, Vector::Zero(layout.n)};
  }
  /// Throws LayoutMismatch if values.size() != layout.n.
  static BlockSignal create(const BlockLayout& layout, Vector values);
};

/// Support decisions treat a block as zero when its norm is at or below this:
/// 1e-12 * (1 + ||x||_2).
double default_zero_tol(const BlockSignal& x);

/// The l-th block of x (1-based), entries (l-1)d+1 .. ld.
Vector block(const BlockSignal& x, int l);

/// Number of blocks with ||x[l]||_2 > zero_tol (defaults to default_zero_tol).
int mixed_l20_norm(const BlockSignal& x, std::optional<double> zero_tol = std::nullopt);

/// Largest block norm, max_l ||x[l]||_2.
double mixed_l2inf_norm(const BlockSignal& x);

/// Indices of blocks with norm above zero_tol, ascending.
BlockSupport block_support(const BlockSignal& x, std::optional<double> zero_tol = std::nullopt);

/// Concatenation of the blocks of x indexed by the support, in its order.
Vector restrict_to(const BlockSignal& x, const BlockSupport& support);

/// Inverse of restrict_to on its image: places v on the support's blocks,
/// zero elsewhere. Throws LengthMismatch unless v has |support| * d entries.
BlockSignal embed(const Vector& v, const BlockSupport& support);

/// Horizontal concatenation of the column-blocks of D indexed by the support.
/// submatrix * restrict_to(x) == D * x for any x supported there.
Matrix submatrix_for_support(const Matrix& d, const BlockSupport& support);

}  // namespace bomp
