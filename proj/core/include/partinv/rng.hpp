#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "partinv/types.hpp"

namespace partinv {

/// Counter-based random stream keyed by (seed, stream id).
///
/// Output i depends only on the key and the counter value i, so a sweep can
/// hand out one stream per (experiment, cell, trial) tuple and draw from them
/// in any order, on any thread, and still reproduce bit-identical values.
/// Two streams with different ids are mixed through independent keys.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_id);
  RngStream(std::uint64_t seed, const std::vector<std::uint64_t>& stream_id);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53 mantissa bits.
  double next_double();

  /// Standard normal via the polar method (one value cached per pair).
  double next_normal();

  /// Uniform on {0, ..., bound-1}; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

  /// k distinct indices from {0, ..., n-1}, returned sorted ascending.
  IndexSet sample_without_replacement(Index n, Index k);

  /// Random permutation of {0, ..., n-1} (Fisher-Yates order).
  IndexSet permutation(Index n);

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool have_cached_normal_ = false;
};

}  // namespace partinv
