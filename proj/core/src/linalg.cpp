#include "partinv/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace partinv::linalg {

void ensure_finite(const Matrix& a, const std::string& what) {
  if (!a.allFinite()) {
    throw std::invalid_argument(what + ": non-finite entries");
  }
}

void ensure_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(what + ": non-finite entries");
  }
}

double rank_tolerance(Index rows, Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon() * sigma_max;
}

SvdFactors svd(const Matrix& a) {
  if (a.size() == 0) throw std::invalid_argument("svd: empty matrix");
  ensure_finite(a, "svd");

  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.u = dec.matrixU();
  f.singular_values = dec.singularValues();
  f.v = dec.matrixV();

  // sign convention: first nonzero entry of each left singular vector > 0
  for (Index j = 0; j < f.u.cols(); ++j) {
    for (Index i = 0; i < f.u.rows(); ++i) {
      const double e = f.u(i, j);
      if (e != 0.0) {
        if (e < 0.0) {
          f.u.col(j) = -f.u.col(j);
          f.v.col(j) = -f.v.col(j);
        }
        break;
      }
    }
  }

  const double smax = f.singular_values.size() > 0 ? f.singular_values(0) : 0.0;
  f.rank_tolerance = rank_tolerance(a.rows(), a.cols(), smax);
  f.numeric_rank = 0;
  for (Index i = 0; i < f.singular_values.size(); ++i) {
    if (f.singular_values(i) > f.rank_tolerance) ++f.numeric_rank;
  }
  return f;
}

Vector least_squares(const Matrix& a, const Vector& y) {
  if (a.size() == 0) throw std::invalid_argument("least_squares: empty matrix");
  if (a.rows() != y.size()) {
    throw std::invalid_argument("least_squares: dimension mismatch");
  }
  ensure_finite(a, "least_squares");
  ensure_finite(y, "least_squares");

  const SvdFactors f = svd(a);
  Vector coeffs = f.u.leftCols(f.numeric_rank).transpose() * y;
  for (Index i = 0; i < f.numeric_rank; ++i) coeffs(i) /= f.singular_values(i);
  return f.v.leftCols(f.numeric_rank) * coeffs;
}

Vector qr_least_squares(const Matrix& a, const Vector& y) {
  if (a.size() == 0) throw std::invalid_argument("qr_least_squares: empty matrix");
  if (a.rows() != y.size()) {
    throw std::invalid_argument("qr_least_squares: dimension mismatch");
  }
  ensure_finite(a, "qr_least_squares");
  ensure_finite(y, "qr_least_squares");

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  return cod.solve(y);
}

RichardsonResult richardson_least_squares(const Matrix& a, const Vector& y,
                                          const RichardsonOptions& opts) {
  if (a.size() == 0) throw std::invalid_argument("richardson_least_squares: empty matrix");
  if (a.rows() != y.size()) {
    throw std::invalid_argument("richardson_least_squares: dimension mismatch");
  }
  ensure_finite(a, "richardson_least_squares");
  ensure_finite(y, "richardson_least_squares");

  double w = opts.relaxation;
  if (w <= 0.0) {
    const double smax = power_iteration_sigma_max(a, 20);
    if (smax <= 0.0) throw std::invalid_argument("richardson_least_squares: zero operator");
    w = 1.0 / (smax * smax);
  }

  RichardsonResult res;
  res.x = Vector::Zero(a.cols());
  const double target = opts.tolerance * (a.transpose() * y).norm();
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vector grad = a.transpose() * (y - a * res.x);
    if (grad.norm() <= target) {
      res.converged = true;
      return res;
    }
    res.x += w * grad;
    res.iterations = it + 1;
  }
  res.converged = (a.transpose() * (y - a * res.x)).norm() <= target;
  return res;
}

double spectral_norm(const Matrix& a) {
  const SvdFactors f = svd(a);
  return f.singular_values.size() > 0 ? f.singular_values(0) : 0.0;
}

double min_singular_value(const Matrix& a) {
  const SvdFactors f = svd(a);
  return f.singular_values(f.singular_values.size() - 1);
}

double min_nonzero_singular_value(const Matrix& a) {
  const SvdFactors f = svd(a);
  if (f.numeric_rank == 0) return 0.0;
  return f.singular_values(f.numeric_rank - 1);
}

double power_iteration_sigma_max(const Matrix& a, int steps) {
  if (a.size() == 0) throw std::invalid_argument("power_iteration_sigma_max: empty matrix");
  Vector v = Vector::Ones(a.cols());
  v /= v.norm();
  double lambda = 0.0;  // estimate of sigma_max^2
  for (int s = 0; s < steps; ++s) {
    Vector w = a.transpose() * (a * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    lambda = v.dot(w);
    v = w / n;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

Matrix normalize_columns(const Matrix& a) {
  ensure_finite(a, "normalize_columns");
  Matrix out = a;
  for (Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n == 0.0) {
      throw std::invalid_argument("normalize_columns: column " + std::to_string(j) +
                                  " has zero norm");
    }
    out.col(j) /= n;
  }
  return out;
}

Matrix columns(const Matrix& a, const IndexSet& indices) {
  Matrix out(a.rows(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const Index c = indices[j];
    if (c < 0 || c >= a.cols()) throw std::invalid_argument("columns: index out of range");
    out.col(static_cast<Index>(j)) = a.col(c);
  }
  return out;
}

Vector scatter(const Vector& values, const IndexSet& support, Index n) {
  if (values.size() != static_cast<Index>(support.size())) {
    throw std::invalid_argument("scatter: values/support size mismatch");
  }
  Vector out = Vector::Zero(n);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Index idx = support[i];
    if (idx < 0 || idx >= n) throw std::invalid_argument("scatter: index out of range");
    out(idx) = values(static_cast<Index>(i));
  }
  return out;
}

}  // namespace partinv::linalg
