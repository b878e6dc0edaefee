#pragma once

// Reference implementations used only by tests. Everything here is written
// with explicit loops and classical textbook algorithms so expected values
// never come from the code under test.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bomp/numeric.hpp"

namespace oracle {

using bomp::Matrix;
using bomp::Vector;

/// Gaussian elimination with partial pivoting; throws on a vanishing pivot.
inline Vector gauss_solve(Matrix g, Vector b) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n || b.size() != n) {
    throw std::invalid_argument("gauss_solve: square system required");
  }
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(g(i, k)) > std::abs(g(piv, k))) {
        piv = i;
      }
    }
    if (std::abs(g(piv, k)) < 1e-13) {
      throw std::runtime_error("gauss_solve: singular pivot");
    }
    if (piv != k) {
      g.row(piv).swap(g.row(k));
      std::swap(b(piv), b(k));
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = g(i, k) / g(k, k);
      for (int j = k; j < n; ++j) {
        g(i, j) -= f * g(k, j);
      }
      b(i) -= f * b(k);
    }
  }
  Vector x = Vector::Zero(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b(i);
    for (int j = i + 1; j < n; ++j) {
      s -= g(i, j) * x(j);
    }
    x(i) = s / g(i, i);
  }
  return x;
}

/// Least squares through the normal equations A'A z = A'y, solved by
/// elimination. Valid for well-conditioned full-rank test systems.
inline Vector normal_equations_solve(const Matrix& a, const Vector& y) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  Matrix g = Matrix::Zero(cols, cols);
  Vector b = Vector::Zero(cols);
  for (int i = 0; i < cols; ++i) {
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int r = 0; r < rows; ++r) {
        s += a(r, i) * a(r, j);
      }
      g(i, j) = s;
    }
    double s = 0.0;
    for (int r = 0; r < rows; ++r) {
      s += a(r, i) * y(r);
    }
    b(i) = s;
  }
  return gauss_solve(g, b);
}

struct EigResult {
  std::vector<double> values;  // unsorted, matches columns of vectors
  Matrix vectors;              // orthonormal columns
};

/// Cyclic Jacobi rotations on a symmetric matrix. Small and slow, but it is
/// a genuinely different algorithm from a tridiagonalization eigensolver.
inline EigResult jacobi_eigen(Matrix s) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n) {
    throw std::invalid_argument("jacobi_eigen: square matrix required");
  }
  Matrix v = Matrix::Identity(n, n);
  if (n <= 1) {
    EigResult r;
    if (n == 1) {
      r.values.push_back(s(0, 0));
    }
    r.vectors = v;
    return r;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        off += s(p, q) * s(p, q);
      }
    }
    if (std::sqrt(off) < 1e-14 * (1.0 + s.norm())) {
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (s(p, q) == 0.0) {
          continue;
        }
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double skp = s(k, p);
          const double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < n; ++k) {
          const double spk = s(p, k);
          const double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  EigResult r;
  r.values.resize(n);
  for (int i = 0; i < n; ++i) {
    r.values[i] = s(i, i);
  }
  r.vectors = v;
  return r;
}

inline std::pair<double, double> eig_extremes(const Matrix& s) {
  const EigResult r = jacobi_eigen(s);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : r.values) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

inline Matrix gram_of(const Matrix& a) {
  const int cols = static_cast<int>(a.cols());
  Matrix g = Matrix::Zero(cols, cols);
  for (int i = 0; i < cols; ++i) {
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int r = 0; r < a.rows(); ++r) {
        s += a(r, i) * a(r, j);
      }
      g(i, j) = s;
    }
  }
  return g;
}

/// Classical Gram-Schmidt with one re-orthogonalization pass; columns that
/// collapse (rank deficiency) are dropped.
inline Matrix gram_schmidt(const Matrix& a) {
  std::vector<Vector> q;
  for (int j = 0; j < a.cols(); ++j) {
    Vector w = a.col(j);
    const double scale = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& u : q) {
        double dot = 0.0;
        for (int r = 0; r < w.size(); ++r) {
          dot += u(r) * w(r);
        }
        for (int r = 0; r < w.size(); ++r) {
          w(r) -= dot * u(r);
        }
      }
    }
    if (w.norm() > 1e-12 * (1.0 + scale)) {
      q.push_back(w / w.norm());
    }
  }
  Matrix out(a.rows(), static_cast<int>(q.size()));
  for (std::size_t j = 0; j < q.size(); ++j) {
    out.col(static_cast<int>(j)) = q[j];
  }
  return out;
}

inline Vector project_complement(const Matrix& basis, const Vector& v) {
  const Matrix q = gram_schmidt(basis);
  Vector w = v;
  for (int j = 0; j < q.cols(); ++j) {
    double dot = 0.0;
    for (int r = 0; r < w.size(); ++r) {
      dot += q(r, j) * v(r);
    }
    for (int r = 0; r < w.size(); ++r) {
      w(r) -= dot * q(r, j);
    }
  }
  return w;
}

/// Exhaustive pairwise normalized inner products.
inline double pairwise_coherence(const Matrix& d) {
  double best = 0.0;
  for (int i = 0; i < d.cols(); ++i) {
    for (int j = i + 1; j < d.cols(); ++j) {
      double dot = 0.0;
      double ni = 0.0;
      double nj = 0.0;
      for (int r = 0; r < d.rows(); ++r) {
        dot += d(r, i) * d(r, j);
        ni += d(r, i) * d(r, i);
        nj += d(r, j) * d(r, j);
      }
      best = std::max(best, std::abs(dot) / std::sqrt(ni * nj));
    }
  }
  return std::min(best, 1.0);
}

/// All k-subsets of {1..m} in ascending lexicographic order.
inline std::vector<std::vector<int>> subsets(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  const auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = next; v <= m; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

inline Matrix block_submatrix(const Matrix& d, int block_len, const std::vector<int>& support) {
  Matrix out(d.rows(), static_cast<int>(support.size()) * block_len);
  int at = 0;
  for (int b : support) {
    for (int c = 0; c < block_len; ++c) {
      out.col(at++) = d.col((b - 1) * block_len + c);
    }
  }
  return out;
}

struct BruteRip {
  double delta = 0.0;
  std::vector<int> worst;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Worst Block-RIP deviation over every support, first attainer kept.
inline BruteRip brute_block_rip(const Matrix& d, int block_len, int order) {
  const int m = static_cast<int>(d.cols()) / block_len;
  BruteRip best;
  best.delta = -std::numeric_limits<double>::infinity();
  for (const std::vector<int>& s : subsets(m, order)) {
    const auto [lo, hi] = eig_extremes(gram_of(block_submatrix(d, block_len, s)));
    const double dev = std::max(hi - 1.0, 1.0 - lo);
    if (dev > best.delta) {
      best.delta = dev;
      best.worst = s;
      best.lambda_min = lo;
      best.lambda_max = hi;
    }
  }
  return best;
}

inline std::uint64_t binomial_pascal(int m, int k) {
  if (k < 0 || k > m) {
    return 0;
  }
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::vector<unsigned __int128> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= m; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      unsigned __int128 s = row[j] + row[j - 1];
      if (s > cap) {
        s = cap;
      }
      row[j] = s;
    }
  }
  return static_cast<std::uint64_t>(row[k]);
}

/// Small deterministic generator for oracle-side sampling, unrelated to the
/// library's counter generator.
struct Lcg {
  std::uint64_t s;

  explicit Lcg(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s;
  }

  double uniform() {  // in (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian() {
    const double u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

  int index(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

}  // namespace oracle
