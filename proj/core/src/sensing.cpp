#include "partinv/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "partinv/linalg.hpp"

namespace partinv::sensing {

namespace {

// near-equal contiguous partition boundary: group g of `groups` over `total`
Index group_begin(Index total, Index groups, Index g) { return g * total / groups; }

}  // namespace

SparseSignal make_sparse_signal(Index n, const IndexSet& support, const Vector& support_values) {
  if (static_cast<Index>(support.size()) != support_values.size()) {
    throw std::invalid_argument("make_sparse_signal: support/values size mismatch");
  }
  if (!std::is_sorted(support.begin(), support.end())) {
    throw std::invalid_argument("make_sparse_signal: support must be sorted");
  }
  SparseSignal s;
  s.n = n;
  s.support = support;
  s.values = linalg::scatter(support_values, support, n);
  return s;
}

Matrix gaussian_matrix(Index m, Index n, RngStream& rng) {
  if (m < 1 || m > n) {
    throw std::invalid_argument("gaussian_matrix: need 1 <= M <= N");
  }
  Matrix a(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) a(i, j) = rng.next_normal();
  }
  return linalg::normalize_columns(a);
}

Matrix correlated_block_matrix(Index m, Index n, Index subsets, RngStream& rng) {
  if (subsets < 1 || m < subsets || n < subsets) {
    throw std::invalid_argument("correlated_block_matrix: need subsets <= M and subsets <= N");
  }
  Matrix a = Matrix::Zero(m, n);
  const double block_sd = 0.25;  // variance 0.0625
  for (Index j = 0; j < n; ++j) {
    const Index group = j * subsets / n;  // inverse of near-equal column split
    const Index r0 = group_begin(m, subsets, group);
    const Index r1 = group_begin(m, subsets, group + 1);
    for (Index i = r0; i < r1; ++i) a(i, j) = 1.0 + block_sd * rng.next_normal();
  }
  const double global_sd = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) a(i, j) += global_sd * rng.next_normal();
  }
  return linalg::normalize_columns(a);
}

const std::vector<double>& antialias_kernel_1d() {
  static const std::vector<double> k = {0.1, 0.2, 0.4, 0.2, 0.1};
  return k;
}

Matrix filter_downsample_1d(const std::vector<double>& kernel, Index n, Index shift) {
  if (kernel.empty() || kernel.size() % 2 == 0) {
    throw std::invalid_argument("filter_downsample_1d: kernel length must be odd");
  }
  if (shift < 1 || n < 1 || n % shift != 0) {
    throw std::invalid_argument("filter_downsample_1d: need shift >= 1 and shift | N");
  }
  const Index rows = n / shift;
  const Index center = static_cast<Index>(kernel.size()) / 2;
  Matrix a = Matrix::Zero(rows, n);
  for (Index i = 0; i < rows; ++i) {
    for (Index t = 0; t < static_cast<Index>(kernel.size()); ++t) {
      const Index col = ((shift * i + t - center) % n + n) % n;
      a(i, col) += kernel[static_cast<std::size_t>(t)];
    }
  }
  return a;
}

Matrix near_delta_blur_kernel() {
  Matrix k = Matrix::Constant(5, 5, 0.02);
  k(2, 2) = 0.29;
  return k;
}

Matrix blur_operator_2d(Index side, const Matrix& kernel) {
  if (kernel.rows() % 2 == 0 || kernel.cols() % 2 == 0 || kernel.size() == 0) {
    throw std::invalid_argument("blur_operator_2d: kernel dimensions must be odd");
  }
  if (side < std::max(kernel.rows(), kernel.cols())) {
    throw std::invalid_argument("blur_operator_2d: side smaller than kernel");
  }
  const Index cr = kernel.rows() / 2;
  const Index cc = kernel.cols() / 2;
  const Index pixels = side * side;
  Matrix h = Matrix::Zero(pixels, pixels);
  for (Index c = 0; c < side; ++c) {
    for (Index r = 0; r < side; ++r) {
      const Index out = c * side + r;
      for (Index v = 0; v < kernel.cols(); ++v) {
        for (Index u = 0; u < kernel.rows(); ++u) {
          const Index sr = ((r + u - cr) % side + side) % side;
          const Index sc = ((c + v - cc) % side + side) % side;
          h(out, sc * side + sr) += kernel(u, v);
        }
      }
    }
  }
  return h;
}

Index SamplingPattern::ones_per_tile() const {
  Index count = 0;
  for (const auto& row : base) {
    for (int v : row) count += (v != 0);
  }
  return count;
}

double SamplingPattern::rate() const { return static_cast<double>(ones_per_tile()) / 16.0; }

SamplingPattern SamplingPattern::preset(int ones_per_tile) {
  SamplingPattern p;
  switch (ones_per_tile) {
    case 2:
      p.base = {{{0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}}};
      break;
    case 4:
      p.base = {{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}};
      break;
    case 6:
      p.base = {{{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 0, 0}, {0, 0, 1, 0}}};
      break;
    case 8:
      p.base = {{{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}}};
      break;
    case 10:
      p.base = {{{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 1, 1}, {1, 1, 0, 1}}};
      break;
    case 12:
      p.base = {{{1, 1, 0, 1}, {0, 1, 1, 1}, {1, 1, 1, 0}, {1, 0, 1, 1}}};
      break;
    case 14:
      p.base = {{{1, 1, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 1}, {0, 1, 1, 1}}};
      break;
    default:
      throw std::invalid_argument("SamplingPattern::preset: no pattern with " +
                                  std::to_string(ones_per_tile) + " ones per tile");
  }
  return p;
}

Matrix sampling_operator(const SamplingPattern& pattern, Index side) {
  if (side != 4 * pattern.replication) {
    throw std::invalid_argument("sampling_operator: side must equal 4*replication");
  }
  const Index m = pattern.ones_per_tile() * pattern.replication * pattern.replication;
  Matrix s = Matrix::Zero(m, side * side);
  Index row = 0;
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < side; ++c) {
      if (pattern.base[static_cast<std::size_t>(r % 4)][static_cast<std::size_t>(c % 4)]) {
        s(row++, c * side + r) = 1.0;
      }
    }
  }
  return s;
}

Matrix compose_sensing(const Matrix& s, const Matrix& h, const Matrix& psi) {
  if (s.cols() != h.rows() || h.cols() != psi.rows()) {
    throw std::invalid_argument("compose_sensing: inner dimensions do not agree");
  }
  return (s * h) * psi;
}

Matrix correlation_map(const Matrix& phi) {
  return (phi.transpose() * phi).cwiseAbs();
}

SparseSignal random_sparse_signal(Index n, Index k, RngStream& rng) {
  if (k < 0 || k > n) throw std::invalid_argument("random_sparse_signal: need 0 <= K <= N");
  const IndexSet support = rng.sample_without_replacement(n, k);
  Vector values(k);
  for (Index i = 0; i < k; ++i) values(i) = rng.next_normal();
  return make_sparse_signal(n, support, values);
}

bool clustered_signal_feasible(Index n, Index k, Index subsets, Index active) {
  return subsets >= 1 && subsets <= n && active >= 1 && active <= subsets && k >= 0 && k <= n;
}

SparseSignal clustered_sparse_signal(Index n, Index k, Index subsets, Index active,
                                     RngStream& rng) {
  if (subsets < 1 || subsets > n || active < 1 || active > subsets) {
    throw std::invalid_argument("clustered_sparse_signal: bad subset parameters");
  }
  if (k < 0 || k > n) throw std::invalid_argument("clustered_sparse_signal: capacity exceeded");
  if (k == 0) return make_sparse_signal(n, {}, Vector(0));

  const auto group_slice = [&](Index g) {
    return std::pair<Index, Index>{group_begin(n, subsets, g), group_begin(n, subsets, g + 1)};
  };
  const Index per = k / active;
  const Index rem = k % active;
  const Index min_group = n / subsets;  // smallest near-equal group size

  IndexSet support;
  const IndexSet chosen = rng.sample_without_replacement(subsets, active);
  if (per <= min_group && (rem == 0 || (active < subsets && rem <= min_group))) {
    for (Index g : chosen) {
      const auto [c0, c1] = group_slice(g);
      for (Index idx : rng.sample_without_replacement(c1 - c0, per)) {
        support.push_back(c0 + idx);
      }
    }
    if (rem > 0) {
      // leftover nonzeros go to a fifth subset, resampled to be distinct
      IndexSet others;
      for (Index g = 0; g < subsets; ++g) {
        if (!std::binary_search(chosen.begin(), chosen.end(), g)) others.push_back(g);
      }
      const Index extra = others[static_cast<std::size_t>(
          rng.next_below(static_cast<std::uint64_t>(others.size())))];
      const auto [c0, c1] = group_slice(extra);
      for (Index idx : rng.sample_without_replacement(c1 - c0, rem)) {
        support.push_back(c0 + idx);
      }
    }
  } else {
    // K overflows the active subsets: fill them completely, then spill into
    // further distinct subsets in random order
    Index remaining = k;
    std::vector<Index> fill_order(chosen.begin(), chosen.end());
    for (Index g : rng.permutation(subsets)) {
      if (!std::binary_search(chosen.begin(), chosen.end(), g)) fill_order.push_back(g);
    }
    for (Index g : fill_order) {
      if (remaining == 0) break;
      const auto [c0, c1] = group_slice(g);
      const Index take = std::min(remaining, c1 - c0);
      for (Index idx : rng.sample_without_replacement(c1 - c0, take)) {
        support.push_back(c0 + idx);
      }
      remaining -= take;
    }
  }
  std::sort(support.begin(), support.end());

  Vector values(static_cast<Index>(support.size()));
  for (Index i = 0; i < values.size(); ++i) values(i) = rng.next_normal();
  return make_sparse_signal(n, support, values);
}

}  // namespace partinv::sensing
