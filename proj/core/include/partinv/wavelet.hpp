#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "partinv/types.hpp"

namespace partinv::wavelet {

/// Orthonormal analysis lowpass filters. The highpass is the alternating
/// flip g[t] = (-1)^t h[L-1-t]; with periodic extension the transform stays
/// exactly orthogonal at every even length.
const std::vector<double>& haar_filter();         // 2 taps
const std::vector<double>& daubechies5_filter();  // 10 taps, 5 vanishing moments

/// Multi-level 1D periodic DWT; output in Mallat order (approximation block
/// first, then detail blocks coarse to fine).
Vector dwt_forward_1d(const Vector& x, const std::vector<double>& lowpass, int levels);
Vector dwt_inverse_1d(const Vector& coeffs, const std::vector<double>& lowpass, int levels);

/// Separable 2D periodic DWT on a square array. One level transforms the
/// columns then the rows of the active block; deeper levels recurse on the
/// top-left quadrant (Mallat layout, LL block at the top-left).
Matrix dwt_forward_2d(const Matrix& image, const std::vector<double>& lowpass, int levels);
Matrix dwt_inverse_2d(const Matrix& coeffs, const std::vector<double>& lowpass, int levels);

/// n x n orthogonal matrix whose columns are the constant vector plus the
/// full-depth Haar wavelets, ordered by the Mallat layout. n must be a power
/// of two.
Matrix haar_basis(Index n);

/// side^2 x side^2 orthogonal synthesis matrix for the 2D Daubechies wavelet
/// with 5 vanishing moments: column j is the inverse 2D transform of the
/// j-th unit coefficient array, vectorized column-major.
Matrix daubechies5_basis_2d(Index side = 32, int levels = 5);

enum class Orientation { horizontal, vertical, diagonal };
enum class SetRole { coarse, tree };

/// Position bookkeeping for the Mallat layout of a side x side coefficient
/// array decomposed `levels` times.
struct MallatLayout {
  Index side = 0;
  int levels = 0;

  /// Array position of the detail coefficient (level, orientation, r, c),
  /// with r, c local to the level's subband (size side/2^level).
  std::pair<Index, Index> detail_position(int level, Orientation o, Index r, Index c) const;

  /// Column-major vector index of array position (row, col).
  Index vec_index(Index row, Index col) const { return col * side + row; }

  Index subband_size(int level) const { return side >> level; }
};

/// Disjoint cover of all side^2 coefficient indices: one coarse set (every
/// coefficient above detail level 3) plus one 21-index quadtree set per
/// level-3 root and orientation.
struct TreePartition {
  MallatLayout layout;
  std::vector<IndexSet> sets;
  std::vector<SetRole> roles;

  Index total() const { return layout.side * layout.side; }
  std::size_t set_count() const { return sets.size(); }
};

TreePartition tree_partition(Index side = 32, int levels = 5);

/// Per-set strength scores: score[j] = sum of |proxy| over set j.
Vector set_strength(const Vector& proxy, const TreePartition& partition);

/// Text export, one line per set: role tag followed by the indices.
void save_partition(const TreePartition& partition, const std::filesystem::path& path);

}  // namespace partinv::wavelet
