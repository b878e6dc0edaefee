#include "bomp/block.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bomp {

BlockLayout BlockLayout::create(int n, int d) {
  if (n <= 0) {
    throw LayoutMismatch("signal length must be positive, got " + std::to_string(n));
  }
  if (d < 1) {
    throw LayoutMismatch("block length must be at least 1, got " + std::to_string(d));
  }
  if (n % d != 0) {
    throw LayoutMismatch("block length " + std::to_string(d) + " does not divide signal length " +
                         std::to_string(n));
  }
  return BlockLayout{n, d, n / d};
}

BlockSupport BlockSupport::create(const BlockLayout& layout, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > layout.m) {
      throw IndexOutOfRange("block index " + std::to_string(indices[i]) + " outside 1.." +
                            std::to_string(layout.m));
    }
    if (i > 0 && indices[i] == indices[i - 1]) {
      throw IndexOutOfRange("duplicate block index " + std::to_string(indices[i]));
    }
  }
  return BlockSupport{layout, std::move(indices)};
}

bool BlockSupport::contains(int block) const {
  return std::binary_search(indices.begin(), indices.end(), block);
}

BlockSupport BlockSupport::complement() const {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(layout.m) - indices.size());
  for (int l = 1; l <= layout.m; ++l) {
    if (!contains(l)) {
      rest.push_back(l);
    }
  }
  return BlockSupport{layout, std::move(rest)};
}

std::string BlockSupport::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << indices[i];
  }
  out << '}';
  return out.str();
}

BlockSignal BlockSignal::create(const BlockLayout& layout, Vector values) {
  if (values.size() != layout.n) {
    throw LayoutMismatch("signal has " + std::to_string(values.size()) +
                         " entries, layout expects " + std::to_string(layout.n));
  }
  require_finite(values, "BlockSignal");
  return BlockSignal{layout, std::move(values)};
}

double default_zero_tol(const BlockSignal& x) { return 1e-12 * (1.0 + x.values.norm()); }

Vector block(const BlockSignal& x, int l) {
  if (l < 1 || l > x.layout.m) {
    throw IndexOutOfRange("block index " + std::to_string(l) + " outside 1.." +
                          std::to_string(x.layout.m));
  }
  return x.values.segment(static_cast<Eigen::Index>(l - 1) * x.layout.d, x.layout.d);
}

int mixed_l20_norm(const BlockSignal& x, std::optional<double> zero_tol) {
  const double tol = zero_tol.value_or(default_zero_tol(x));
  int count = 0;
  for (int l = 1; l <= x.layout.m; ++l) {
    if (block(x, l).norm() > tol) {
      ++count;
    }
  }
  return count;
}

double mixed_l2inf_norm(const BlockSignal& x) {
  double best = 0.0;
  for (int l = 1; l <= x.layout.m; ++l) {
    best = std::max(best, block(x, l).norm());
  }
  return best;
}

BlockSupport block_support(const BlockSignal& x, std::optional<double> zero_tol) {
  const double tol = zero_tol.value_or(default_zero_tol(x));
  std::vector<int> indices;
  for (int l = 1; l <= x.layout.m; ++l) {
    if (block(x, l).norm() > tol) {
      indices.push_back(l);
    }
  }
  return BlockSupport{x.layout, std::move(indices)};
}

Vector restrict_to(const BlockSignal& x, const BlockSupport& support) {
  if (support.layout != x.layout) {
    throw LayoutMismatch("support layout differs from signal layout");
  }
  Vector out(static_cast<Eigen::Index>(support.size()) * x.layout.d);
  for (int i = 0; i < support.size(); ++i) {
    out.segment(static_cast<Eigen::Index>(i) * x.layout.d, x.layout.d) =
        block(x, support.indices[static_cast<std::size_t>(i)]);
  }
  return out;
}

BlockSignal embed(const Vector& v, const BlockSupport& support) {
  const int d = support.layout.d;
  if (v.size() != static_cast<Eigen::Index>(support.size()) * d) {
    throw LengthMismatch("expected " + std::to_string(support.size() * d) + " entries, got " +
                         std::to_string(v.size()));
  }
  BlockSignal x = BlockSignal::zero(support.layout);
  for (int i = 0; i < support.size(); ++i) {
    const int l = support.indices[static_cast<std::size_t>(i)];
    x.values.segment(static_cast<Eigen::Index>(l - 1) * d, d) =
        v.segment(static_cast<Eigen::Index>(i) * d, d);
  }
  return x;
}

Matrix submatrix_for_support(const Matrix& d, const BlockSupport& support) {
  const int bd = support.layout.d;
  if (d.cols() != support.layout.n) {
    throw LayoutMismatch("matrix has " + std::to_string(d.cols()) + " columns, layout expects " +
                         std::to_string(support.layout.n));
  }
  Matrix out(d.rows(), static_cast<Eigen::Index>(support.size()) * bd);
  for (int i = 0; i < support.size(); ++i) {
    const int l = support.indices[static_cast<std::size_t>(i)];
    out.middleCols(static_cast<Eigen::Index>(i) * bd, bd) =
        d.middleCols(static_cast<Eigen::Index>(l - 1) * bd, bd);
  }
  return out;
}

}  // namespace bomp
