#pragma once

// Test-only reference implementations, independent of the library's solve
// paths: Gaussian elimination, power iteration, exhaustive support search,
// closed-form Haar atoms, and a next-combination helper.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "partinv/types.hpp"

namespace oracles {

using partinv::Index;
using partinv::IndexSet;
using partinv::Matrix;
using partinv::Vector;

// Square solve by Gaussian elimination with partial pivoting.
inline Vector gauss_solve(Matrix a, Vector b) {
  const Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("gauss_solve: bad dims");
  for (Index col = 0; col < n; ++col) {
    Index pivot = col;
    for (Index r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw std::runtime_error("gauss_solve: singular");
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b(pivot), b(col));
    }
    for (Index r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      a.row(r).tail(n - col) -= f * a.row(col).tail(n - col);
      b(r) -= f * b(col);
    }
  }
  Vector x(n);
  for (Index r = n - 1; r >= 0; --r) {
    double s = b(r);
    for (Index c = r + 1; c < n; ++c) s -= a(r, c) * x(c);
    x(r) = s / a(r, r);
  }
  return x;
}

// Least squares through the normal equations (full-column-rank only).
inline Vector normal_equations_solve(const Matrix& a, const Vector& y) {
  return gauss_solve(a.transpose() * a, a.transpose() * y);
}

// sigma_max by power iteration with a randomized start.
inline double power_sigma_max(const Matrix& a, int iters = 200, unsigned seed = 1234) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = normal(gen);
  v /= v.norm();
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector w = a.transpose() * (a * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    lambda = v.dot(w);
    v = w / n;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

// Advance a sorted size-k combination of {0..n-1}; false when exhausted.
inline bool next_combination(IndexSet& comb, Index n) {
  const Index k = static_cast<Index>(comb.size());
  Index i = k - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) {
    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

inline IndexSet first_combination(Index k) {
  IndexSet comb(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
  return comb;
}

struct SupportSearch {
  IndexSet best_support;
  double best_residual = 0.0;
  int zero_residual_count = 0;  // supports fitting y to within the tolerance
  IndexSet zero_support;        // the last such support
};

// Exhaustive least-squares search over all size-k supports, solved through
// the normal equations so it shares nothing with the library path.
inline SupportSearch best_support_search(const Matrix& phi, const Vector& y, Index k,
                                         double zero_tol) {
  SupportSearch out;
  out.best_residual = std::numeric_limits<double>::infinity();
  IndexSet comb = first_combination(k);
  do {
    Matrix cols(phi.rows(), k);
    for (Index j = 0; j < k; ++j) cols.col(j) = phi.col(comb[static_cast<std::size_t>(j)]);
    const Vector x = normal_equations_solve(cols, y);
    const double res = (y - cols * x).norm();
    if (res < out.best_residual) {
      out.best_residual = res;
      out.best_support = comb;
    }
    if (res <= zero_tol) {
      ++out.zero_residual_count;
      out.zero_support = comb;
    }
  } while (next_combination(comb, phi.cols()));
  return out;
}

// Haar synthesis matrix from the closed form: one constant column, then for
// each detail level l (coarse blocks of length 2^l) step wavelets that are
// +2^(-l/2) on the first half of their block and -2^(-l/2) on the second.
// Column order matches the Mallat layout (detail level l at offset n/2^l).
inline Matrix closed_form_haar(Index n) {
  Matrix psi = Matrix::Zero(n, n);
  psi.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  for (Index block = 2; block <= n; block *= 2) {  // block = 2^level
    const Index count = n / block;                 // wavelets at this level
    const double amp = 1.0 / std::sqrt(static_cast<double>(block));
    for (Index k = 0; k < count; ++k) {
      const Index col = count + k;  // Mallat offset n/2^level = count
      for (Index t = 0; t < block / 2; ++t) {
        psi(k * block + t, col) = amp;
        psi(k * block + block / 2 + t, col) = -amp;
      }
    }
  }
  return psi;
}

}  // namespace oracles
