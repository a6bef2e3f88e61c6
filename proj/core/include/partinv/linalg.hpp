#pragma once

#include <string>

#include "partinv/types.hpp"

namespace partinv::linalg {

/// Reduced SVD with a deterministic sign convention: the first nonzero entry
/// of every left singular vector is positive.
struct SvdFactors {
  Matrix u;                // one column per singular value
  Vector singular_values;  // nonincreasing, nonnegative
  Matrix v;
  Index numeric_rank = 0;  // count of values above rank_tolerance
  double rank_tolerance = 0.0;
};

/// Numerical-rank cutoff: max(rows, cols) * machine epsilon * sigma_max.
double rank_tolerance(Index rows, Index cols, double sigma_max);

SvdFactors svd(const Matrix& a);

/// Minimum-norm least-squares solution A^+ y via truncated SVD. Singular
/// values at or below the rank tolerance are dropped, so rank-deficient
/// systems are solved rather than rejected.
Vector least_squares(const Matrix& a, const Vector& y);

/// Same minimum-norm solution via a rank-revealing complete orthogonal
/// decomposition. Cheaper than the SVD route; used in recovery inner loops
/// and cross-checked against least_squares in the test suite.
Vector qr_least_squares(const Matrix& a, const Vector& y);

struct RichardsonOptions {
  double relaxation = 0.0;  // <= 0: use 1/sigma_max^2 from 20 power-iteration steps
  int max_iterations = 10000;
  double tolerance = 1e-12;  // on ||A*(y - Ax)|| relative to ||A*y||
};

struct RichardsonResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
};

/// Stationary iteration x <- x + w A*(y - Ax) from x = 0. Requires full
/// column rank and 0 < w < 2/sigma_max^2 to converge; a run that exhausts
/// max_iterations returns the best iterate flagged not converged.
RichardsonResult richardson_least_squares(const Matrix& a, const Vector& y,
                                          const RichardsonOptions& opts = {});

double spectral_norm(const Matrix& a);

/// Smallest of the min(rows, cols) singular values (may be zero).
double min_singular_value(const Matrix& a);

/// Smallest singular value above the rank tolerance; zero for a zero matrix.
double min_nonzero_singular_value(const Matrix& a);

/// sigma_max estimate by power iteration on A*A with a fixed start vector;
/// fully deterministic.
double power_iteration_sigma_max(const Matrix& a, int steps = 20);

/// Rescale every column to unit l2 norm; throws naming the column index if a
/// zero column is found.
Matrix normalize_columns(const Matrix& a);

/// Column gather: B = A(:, indices). Indices need not be sorted.
Matrix columns(const Matrix& a, const IndexSet& indices);

/// Length-n vector with values[i] placed at support[i], zeros elsewhere.
Vector scatter(const Vector& values, const IndexSet& support, Index n);

void ensure_finite(const Matrix& a, const std::string& what);
void ensure_finite(const Vector& v, const std::string& what);

}  // namespace partinv::linalg
