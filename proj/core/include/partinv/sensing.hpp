#pragma once

#include <array>
#include <vector>

#include "partinv/rng.hpp"
#include "partinv/types.hpp"

namespace partinv::sensing {

/// K-sparse coefficient vector with its support made explicit.
struct SparseSignal {
  Index n = 0;
  Vector values;     // length n, zero off support
  IndexSet support;  // sorted ascending, |support| = K

  Index sparsity() const { return static_cast<Index>(support.size()); }
};

/// Build a SparseSignal from support indices and the matching values
/// (support_values[i] goes to position support[i]).
SparseSignal make_sparse_signal(Index n, const IndexSet& support, const Vector& support_values);

/// M x N matrix of iid standard normals with columns rescaled to unit l2
/// norm. Requires M <= N. Entries are drawn column-major.
Matrix gaussian_matrix(Index m, Index n, RngStream& rng);

/// Block-structured matrix with heavily correlated column subsets: columns
/// are split into `subsets` contiguous groups, group j has its band of rows
/// set to 1 + N(0, 0.0625), then N(0, 1/M) noise is added everywhere and
/// columns are normalized. Rows and columns are partitioned into near-equal
/// contiguous groups (sizes differ by at most one when not divisible).
Matrix correlated_block_matrix(Index m, Index n, Index subsets, RngStream& rng);

/// (N/shift) x N operator combining filtering and downsampling: row i holds
/// the kernel centered at column shift*i, wrapped circularly. Kernel length
/// must be odd.
Matrix filter_downsample_1d(const std::vector<double>& kernel, Index n, Index shift = 2);

/// 5-tap kernel used by filter_downsample_1d demos: {0.1, 0.2, 0.4, 0.2, 0.1}.
const std::vector<double>& antialias_kernel_1d();

/// side^2 x side^2 operator applying 2D circular convolution with an
/// odd-sized kernel to a column-major vectorized side x side image.
Matrix blur_operator_2d(Index side, const Matrix& kernel);

/// 5x5 near-delta kernel: 0.29 at the center, 0.02 elsewhere (row sums 0.77,
/// deliberately not renormalized).
Matrix near_delta_blur_kernel();

/// 4x4 binary mask replicated into a (4*replication)^2 sampling grid.
struct SamplingPattern {
  std::array<std::array<int, 4>, 4> base{};
  int replication = 8;

  Index ones_per_tile() const;
  double rate() const;  // ones_per_tile / 16

  /// Preset patterns for 2, 4, 6, 8, 10, 12, 14 ones per 4x4 tile.
  static SamplingPattern preset(int ones_per_tile);
};

/// M x side^2 binary selection matrix, one row per mask 1-entry in row-major
/// mask order; pixel (r, c) maps to vector index c*side + r (column-major).
Matrix sampling_operator(const SamplingPattern& pattern, Index side);

/// Phi = S * H * Psi.
Matrix compose_sensing(const Matrix& s, const Matrix& h, const Matrix& psi);

/// |Phi^T Phi|.
Matrix correlation_map(const Matrix& phi);

/// Support drawn uniformly without replacement, values iid N(0,1) assigned
/// in ascending support order.
SparseSignal random_sparse_signal(Index n, Index k, RngStream& rng);

/// Nonzeros concentrated on `active` random column subsets: floor(K/active)
/// per selected subset, with the K mod active leftovers in one extra subset
/// distinct from the active ones.
SparseSignal clustered_sparse_signal(Index n, Index k, Index subsets, Index active,
                                     RngStream& rng);

/// Whether clustered_sparse_signal can place K nonzeros with these subset
/// parameters (floor(K/active) must fit in the smallest group, and leftovers
/// need a spare group).
bool clustered_signal_feasible(Index n, Index k, Index subsets, Index active);

}  // namespace partinv::sensing
