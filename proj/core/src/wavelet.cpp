#include "partinv/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace partinv::wavelet {

namespace {

std::vector<double> highpass_of(const std::vector<double>& lowpass) {
  const std::size_t len = lowpass.size();
  std::vector<double> g(len);
  for (std::size_t t = 0; t < len; ++t) {
    const double h = lowpass[len - 1 - t];
    g[t] = (t % 2 == 0) ? h : -h;
  }
  return g;
}

// one analysis level over x[0..len): [approx | detail]
void analysis_step(const double* x, Index len, const std::vector<double>& h,
                   const std::vector<double>& g, double* out) {
  const Index half = len / 2;
  const Index taps = static_cast<Index>(h.size());
  for (Index k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    for (Index t = 0; t < taps; ++t) {
      const double xv = x[(2 * k + t) % len];
      a += h[static_cast<std::size_t>(t)] * xv;
      d += g[static_cast<std::size_t>(t)] * xv;
    }
    out[k] = a;
    out[half + k] = d;
  }
}

// adjoint of analysis_step (the transform is orthogonal)
void synthesis_step(const double* coeffs, Index len, const std::vector<double>& h,
                    const std::vector<double>& g, double* out) {
  const Index half = len / 2;
  const Index taps = static_cast<Index>(h.size());
  std::fill(out, out + len, 0.0);
  for (Index k = 0; k < half; ++k) {
    const double a = coeffs[k];
    const double d = coeffs[half + k];
    for (Index t = 0; t < taps; ++t) {
      out[(2 * k + t) % len] +=
          a * h[static_cast<std::size_t>(t)] + g[static_cast<std::size_t>(t)] * d;
    }
  }
}

void validate_transform_args(Index n, const std::vector<double>& lowpass, int levels) {
  if (lowpass.size() < 2 || lowpass.size() % 2 != 0) {
    throw std::invalid_argument("dwt: lowpass filter length must be even and >= 2");
  }
  if (levels < 1) throw std::invalid_argument("dwt: levels must be >= 1");
  if (n % (Index{1} << levels) != 0) {
    throw std::invalid_argument("dwt: length must be divisible by 2^levels");
  }
}

}  // namespace

const std::vector<double>& haar_filter() {
  static const std::vector<double> h = {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  return h;
}

const std::vector<double>& daubechies5_filter() {
  static const std::vector<double> h = {
      0.16010239797419451,    0.60382926979719542,  0.72430852843777849,
      0.13842814590131872,    -0.24229488706638846, -0.03224486958464147,
      0.077571493840045289,   -0.0062414902127986985,
      -0.012580751999082186,  0.0033357252854738038};
  return h;
}

Vector dwt_forward_1d(const Vector& x, const std::vector<double>& lowpass, int levels) {
  validate_transform_args(x.size(), lowpass, levels);
  const auto g = highpass_of(lowpass);
  Vector out = x;
  std::vector<double> scratch(static_cast<std::size_t>(x.size()));
  Index len = x.size();
  for (int lev = 0; lev < levels; ++lev) {
    analysis_step(out.data(), len, lowpass, g, scratch.data());
    std::copy(scratch.begin(), scratch.begin() + len, out.data());
    len /= 2;
  }
  return out;
}

Vector dwt_inverse_1d(const Vector& coeffs, const std::vector<double>& lowpass, int levels) {
  validate_transform_args(coeffs.size(), lowpass, levels);
  const auto g = highpass_of(lowpass);
  Vector out = coeffs;
  std::vector<double> scratch(static_cast<std::size_t>(coeffs.size()));
  for (int lev = levels - 1; lev >= 0; --lev) {
    const Index len = coeffs.size() >> lev;
    synthesis_step(out.data(), len, lowpass, g, scratch.data());
    std::copy(scratch.begin(), scratch.begin() + len, out.data());
  }
  return out;
}

Matrix dwt_forward_2d(const Matrix& image, const std::vector<double>& lowpass, int levels) {
  if (image.rows() != image.cols()) throw std::invalid_argument("dwt_forward_2d: square input");
  validate_transform_args(image.rows(), lowpass, levels);
  const auto g = highpass_of(lowpass);
  Matrix out = image;
  std::vector<double> line(static_cast<std::size_t>(image.rows()));
  std::vector<double> scratch(static_cast<std::size_t>(image.rows()));
  for (int lev = 0; lev < levels; ++lev) {
    const Index len = image.rows() >> lev;
    for (Index c = 0; c < len; ++c) {  // columns first
      for (Index r = 0; r < len; ++r) line[static_cast<std::size_t>(r)] = out(r, c);
      analysis_step(line.data(), len, lowpass, g, scratch.data());
      for (Index r = 0; r < len; ++r) out(r, c) = scratch[static_cast<std::size_t>(r)];
    }
    for (Index r = 0; r < len; ++r) {  // then rows
      for (Index c = 0; c < len; ++c) line[static_cast<std::size_t>(c)] = out(r, c);
      analysis_step(line.data(), len, lowpass, g, scratch.data());
      for (Index c = 0; c < len; ++c) out(r, c) = scratch[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

Matrix dwt_inverse_2d(const Matrix& coeffs, const std::vector<double>& lowpass, int levels) {
  if (coeffs.rows() != coeffs.cols()) throw std::invalid_argument("dwt_inverse_2d: square input");
  validate_transform_args(coeffs.rows(), lowpass, levels);
  const auto g = highpass_of(lowpass);
  Matrix out = coeffs;
  std::vector<double> line(static_cast<std::size_t>(coeffs.rows()));
  std::vector<double> scratch(static_cast<std::size_t>(coeffs.rows()));
  for (int lev = levels - 1; lev >= 0; --lev) {
    const Index len = coeffs.rows() >> lev;
    for (Index r = 0; r < len; ++r) {  // rows first (reverse of forward)
      for (Index c = 0; c < len; ++c) line[static_cast<std::size_t>(c)] = out(r, c);
      synthesis_step(line.data(), len, lowpass, g, scratch.data());
      for (Index c = 0; c < len; ++c) out(r, c) = scratch[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < len; ++c) {  // then columns
      for (Index r = 0; r < len; ++r) line[static_cast<std::size_t>(r)] = out(r, c);
      synthesis_step(line.data(), len, lowpass, g, scratch.data());
      for (Index r = 0; r < len; ++r) out(r, c) = scratch[static_cast<std::size_t>(r)];
    }
  }
  return out;
}

Matrix haar_basis(Index n) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("haar_basis: n must be a power of two");
  }
  int levels = 0;
  while ((Index{1} << levels) < n) ++levels;
  Matrix psi(n, n);
  Vector unit = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    unit(j) = 1.0;
    psi.col(j) = (n == 1) ? unit : dwt_inverse_1d(unit, haar_filter(), levels);
    unit(j) = 0.0;
  }
  return psi;
}

Matrix daubechies5_basis_2d(Index side, int levels) {
  validate_transform_args(side, daubechies5_filter(), levels);
  const Index pixels = side * side;
  Matrix psi(pixels, pixels);
  Matrix unit = Matrix::Zero(side, side);
  for (Index j = 0; j < pixels; ++j) {
    unit(j % side, j / side) = 1.0;
    const Matrix image = dwt_inverse_2d(unit, daubechies5_filter(), levels);
    for (Index c = 0; c < side; ++c) {
      psi.block(c * side, j, side, 1) = image.col(c);
    }
    unit(j % side, j / side) = 0.0;
  }
  return psi;
}

std::pair<Index, Index> MallatLayout::detail_position(int level, Orientation o, Index r,
                                                      Index c) const {
  const Index s = subband_size(level);
  if (level < 1 || level > levels || r < 0 || r >= s || c < 0 || c >= s) {
    throw std::invalid_argument("MallatLayout::detail_position: out of range");
  }
  switch (o) {
    case Orientation::horizontal:  // lowpass rows, highpass columns: top-right
      return {r, c + s};
    case Orientation::vertical:  // highpass rows, lowpass columns: bottom-left
      return {r + s, c};
    case Orientation::diagonal:
      return {r + s, c + s};
  }
  throw std::invalid_argument("MallatLayout::detail_position: bad orientation");
}

TreePartition tree_partition(Index side, int levels) {
  if (levels < 4) throw std::invalid_argument("tree_partition: need at least 4 levels");
  if (side < 8 || side % (Index{1} << levels) != 0) {
    throw std::invalid_argument("tree_partition: side must be divisible by 2^levels");
  }

  TreePartition p;
  p.layout = MallatLayout{side, levels};
  const Index root_band = side >> 3;  // level-3 subband size

  // coarse set: the top-left root_band x root_band block (everything coarser
  // than detail level 3)
  IndexSet coarse;
  for (Index c = 0; c < root_band; ++c) {
    for (Index r = 0; r < root_band; ++r) coarse.push_back(p.layout.vec_index(r, c));
  }
  std::sort(coarse.begin(), coarse.end());
  p.sets.push_back(std::move(coarse));
  p.roles.push_back(SetRole::coarse);

  const Orientation orientations[] = {Orientation::horizontal, Orientation::vertical,
                                      Orientation::diagonal};
  for (Orientation o : orientations) {
    for (Index r = 0; r < root_band; ++r) {
      for (Index c = 0; c < root_band; ++c) {
        IndexSet tree;
        for (int level = 3; level >= 1; --level) {
          const Index scale = Index{1} << (3 - level);  // 1, 2, 4
          for (Index dr = 0; dr < scale; ++dr) {
            for (Index dc = 0; dc < scale; ++dc) {
              const auto pos =
                  p.layout.detail_position(level, o, r * scale + dr, c * scale + dc);
              tree.push_back(p.layout.vec_index(pos.first, pos.second));
            }
          }
        }
        std::sort(tree.begin(), tree.end());
        p.sets.push_back(std::move(tree));
        p.roles.push_back(SetRole::tree);
      }
    }
  }
  return p;
}

Vector set_strength(const Vector& proxy, const TreePartition& partition) {
  if (proxy.size() != partition.total()) {
    throw std::invalid_argument("set_strength: proxy length does not match partition");
  }
  Vector scores(static_cast<Index>(partition.sets.size()));
  for (std::size_t j = 0; j < partition.sets.size(); ++j) {
    double s = 0.0;
    for (Index idx : partition.sets[j]) s += std::abs(proxy(idx));
    scores(static_cast<Index>(j)) = s;
  }
  return scores;
}

void save_partition(const TreePartition& partition, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t j = 0; j < partition.sets.size(); ++j) {
    os << (partition.roles[j] == SetRole::coarse ? "coarse" : "tree");
    for (Index idx : partition.sets[j]) os << ' ' << idx;
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace partinv::wavelet
