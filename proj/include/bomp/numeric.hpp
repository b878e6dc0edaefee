#pragma once

#include <Eigen/Dense>

#include "bomp/errors.hpp"

namespace bomp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Smallest and largest eigenvalue of a Gram matrix A'A, i.e. the squared
/// extreme singular values of A.
struct EigenExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Throws Error if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

/// Validated dense construction from a flat row-major entry list.
Matrix make_matrix(Eigen::Index rows, Eigen::Index cols, const std::vector<double>& entries);
Vector make_vector(const std::vector<double>& entries);

/// argmin_z ||y - A z||_2 for A with rows >= cols via an orthogonal
/// factorization (SVD). The residual y - A z is orthogonal to the columns of
/// A at machine precision.
///
/// Throws RankDeficient unless the smallest singular value exceeds
/// rank_tol times the largest.
Vector solve_least_squares(const Matrix& a, const Vector& y, double rank_tol = 1e-10);

/// Extreme eigenvalues of A'A, so that over unit vectors z,
/// ||Az||^2 ranges over exactly [lambda_min, lambda_max].
EigenExtremes gram_extreme_eigenvalues(const Matrix& a);

/// Component of v orthogonal to the column span of basis. A basis with zero
/// columns acts as the empty span: v is returned unchanged.
Vector project_complement(const Matrix& basis, const Vector& v, double rank_tol = 1e-10);

/// max over column pairs i != j of |<d_i, d_j>| / (||d_i|| ||d_j||), in [0, 1].
/// Throws ZeroColumn if a column norm falls below zero_tol.
double coherence(const Matrix& d, double zero_tol = 1e-12);

}  // namespace bomp
