#include "bomp/numeric.hpp"

#include <cmath>
#include <string>

namespace bomp {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(std::string(what) + ": non-finite entry");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(std::string(what) + ": non-finite entry");
  }
}

Matrix make_matrix(Eigen::Index rows, Eigen::Index cols, const std::vector<double>& entries) {
  if (rows <= 0 || cols <= 0) {
    throw ValidationError("shape", "dimensions must be positive");
  }
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols) {
    throw LengthMismatch("expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(entries.size()));
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
    }
  }
  require_finite(m, "make_matrix");
  return m;
}

Vector make_vector(const std::vector<double>& entries) {
  if (entries.empty()) {
    throw ValidationError("length", "vector must be non-empty");
  }
  Vector v(static_cast<Eigen::Index>(entries.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = entries[static_cast<std::size_t>(i)];
  }
  require_finite(v, "make_vector");
  return v;
}

Vector solve_least_squares(const Matrix& a, const Vector& y, double rank_tol) {
  if (a.rows() != y.size()) {
    throw LengthMismatch("matrix has " + std::to_string(a.rows()) + " rows, rhs has " +
                         std::to_string(y.size()));
  }
  if (a.rows() < a.cols()) {
    throw RankDeficient("underdetermined system: " + std::to_string(a.rows()) + " rows, " +
                        std::to_string(a.cols()) + " cols");
  }
  require_finite(a, "solve_least_squares: matrix");
  require_finite(y, "solve_least_squares: rhs");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > rank_tol * smax)) {
    throw RankDeficient("singular value ratio " + std::to_string(smax > 0 ? smin / smax : 0.0) +
                        " at or below tolerance");
  }
  return svd.solve(y);
}

EigenExtremes gram_extreme_eigenvalues(const Matrix& a) {
  require_finite(a, "gram_extreme_eigenvalues");
  const Matrix gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error("eigenvalue iteration failed to converge");
  }
  const auto& ev = es.eigenvalues();  // ascending
  return {ev(0), ev(ev.size() - 1)};
}

Vector project_complement(const Matrix& basis, const Vector& v, double rank_tol) {
  if (basis.cols() == 0) {
    return v;
  }
  if (basis.rows() != v.size()) {
    throw LengthMismatch("basis has " + std::to_string(basis.rows()) + " rows, vector has " +
                         std::to_string(v.size()));
  }
  require_finite(basis, "project_complement: basis");
  require_finite(v, "project_complement: vector");
  // Orthonormal range basis via SVD; singular directions below
  // rank_tol * sigma_max do not count toward the span, so a rank
  // deficient basis still projects onto its actual column space.
  Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) {
    ++rank;
  }
  if (rank == 0) {
    return v;
  }
  const auto u = svd.matrixU().leftCols(rank);
  return v - u * (u.transpose() * v);
}

double coherence(const Matrix& d, double zero_tol) {
  require_finite(d, "coherence");
  if (d.cols() < 2) {
    throw ValidationError("cols", "coherence needs at least two columns");
  }
  Vector norms(d.cols());
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    norms(j) = d.col(j).norm();
    if (norms(j) <= zero_tol) {
      throw ZeroColumn("column " + std::to_string(j + 1) + " has norm " +
                       std::to_string(norms(j)));
    }
  }
  double best = 0.0;
  for (Eigen::Index i = 0; i < d.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      const double c = std::abs(d.col(i).dot(d.col(j))) / (norms(i) * norms(j));
      best = std::max(best, c);
    }
  }
  return std::min(best, 1.0);
}

}  // namespace bomp
