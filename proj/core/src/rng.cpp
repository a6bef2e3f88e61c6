#include "partinv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace partinv {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, const std::uint64_t* ids, std::size_t count) {
  std::uint64_t key = mix64(seed);
  for (std::size_t i = 0; i < count; ++i) {
    // chain so that ids are order-sensitive and {a} != {a,0}
    key = mix64(key ^ mix64(ids[i] + kGolden * (i + 1)));
  }
  return key;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_id)
    : key_(derive_key(seed, stream_id.begin(), stream_id.size())) {}

RngStream::RngStream(std::uint64_t seed, const std::vector<std::uint64_t>& stream_id)
    : key_(derive_key(seed, stream_id.data(), stream_id.size())) {}

std::uint64_t RngStream::next_u64() {
  return mix64(key_ + counter_++ * kGolden);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  have_cached_normal_ = true;
  return u * f;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RngStream::next_below: bound must be positive");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

IndexSet RngStream::sample_without_replacement(Index n, Index k) {
  if (k < 0 || n < 0 || k > n) {
    throw std::invalid_argument("RngStream::sample_without_replacement: need 0 <= k <= n");
  }
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  IndexSet out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

IndexSet RngStream::permutation(Index n) {
  if (n < 0) throw std::invalid_argument("RngStream::permutation: negative length");
  IndexSet pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i + 1 < n; ++i) {
    const auto j = i + static_cast<Index>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  return pool;
}

}  // namespace partinv
