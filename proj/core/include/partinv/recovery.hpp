#pragma once

#include "partinv/sensing.hpp"
#include "partinv/types.hpp"
#include "partinv/wavelet.hpp"

namespace partinv::recovery {

enum class Termination { residual_converged, support_stagnated, max_iterations };
const char* to_string(Termination t);

struct RecoveryResult {
  Vector estimate;          // length N, exactly K-sparse
  IndexSet support;         // sorted, |support| = K
  int iterations = 0;
  double residual_norm = 0.0;  // ||y - Phi * estimate||_2
  Termination termination = Termination::max_iterations;
};

enum class InnerSolver { direct, richardson };

struct PartInvOptions {
  Index subset_size = 0;           // L; 0 means L = K
  int max_iterations = 0;          // 0 means max(K, 30)
  double residual_tolerance = 1e-7;  // relative to ||y||
  InnerSolver solver = InnerSolver::direct;

  static PartInvOptions with_subset_size(Index l) {
    PartInvOptions o;
    o.subset_size = l;
    return o;
  }
  /// L = max(K, floor(0.8 M)), the preset for heavily correlated ensembles.
  static PartInvOptions wide_subset(Index k, Index m) {
    return with_subset_size(std::max(k, static_cast<Index>(0.8 * static_cast<double>(m))));
  }
};

/// Partial inversion: least-squares invert on the current size-L candidate
/// set, score the complement against the residual, reselect the top L of the
/// combined estimate, and stop on a small full residual or a repeated
/// candidate set. The output is finalized to the K strongest inverted
/// coefficients with one more least-squares solve on that support.
RecoveryResult partinv(const Matrix& phi, const Vector& y, Index k,
                       const PartInvOptions& opts = {});

/// Tree-structured variant: candidate sets are unions of whole partition
/// sets, ranked by the absolute-sum strength of the current estimate and
/// grown until they cover at least K coefficients.
RecoveryResult partinv_wavelet(const Matrix& phi, const Vector& y, Index k,
                               const wavelet::TreePartition& partition,
                               const PartInvOptions& opts = {});

/// Baseline greedy recovery: proxy on the residual, merge the top 2K with
/// the current support, least-squares on the merged set, prune to K.
RecoveryResult cosamp(const Matrix& phi, const Vector& y, Index k, int max_iterations = 0);

/// Indices of the `count` largest-magnitude entries; ties go to the lower
/// index; result sorted ascending.
IndexSet select_top(const Vector& v, Index count);

/// Rank sets by strength (descending, ties to the lower id) and accumulate
/// whole sets until at least k_min indices are covered. Returns the chosen
/// set ids in rank order.
std::vector<Index> select_strongest_sets(const Vector& strengths,
                                         const std::vector<Index>& set_sizes, Index k_min);

/// Success test for a recovered estimate: (1/N) ||c - estimate||^2 < 1e-5.
bool success(const sensing::SparseSignal& c, const Vector& estimate);

}  // namespace partinv::recovery
