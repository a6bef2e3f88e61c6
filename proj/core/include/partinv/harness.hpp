#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "partinv/recovery.hpp"
#include "partinv/types.hpp"

namespace partinv::harness {

enum class Ensemble { gaussian, correlated_block, wavelet_tree };
enum class Algorithm { partinv, cosamp, partinv_wavelet };
enum class LPolicy { equal_k, max_k_08m, explicit_list };

std::string to_string(Ensemble e);
std::string to_string(Algorithm a);
std::string to_string(LPolicy p);

struct SweepConfig {
  Ensemble ensemble = Ensemble::gaussian;
  Index n = 256;
  std::vector<double> delta_grid = default_grid();
  std::vector<double> rho_grid = default_grid();
  int trials = 25;
  Algorithm algorithm = Algorithm::partinv;
  LPolicy l_policy = LPolicy::equal_k;
  std::vector<Index> l_list;  // one entry per delta-grid point when explicit_list
  std::uint64_t seed = 0;

  static std::vector<double> default_grid();  // 0.1 .. 0.9 step 0.1
};

struct SweepCell {
  double delta = 0.0, rho = 0.0;
  Index m = 0, k = 0, l = 0;
  int trials = 0;
  int successes = 0;
  double mean_iterations = 0.0;
  double mean_residual = 0.0;
  bool skipped = false;
};

struct SweepGrid {
  SweepConfig config;
  Index delta_count = 0;
  Index rho_count = 0;
  std::vector<SweepCell> cells;  // index (di, ri) at ri * delta_count + di

  const SweepCell& at(Index di, Index ri) const;
};

/// Success-proportion sweep over the (delta, rho) grid. Matrix and signal
/// draws use one stream per (cell, trial, role), so results are independent
/// of execution order and thread count. Infeasible cells (K < 1 or L >= M)
/// are marked skipped.
SweepGrid phase_diagram(const SweepConfig& cfg);

struct LSensitivityPoint {
  Index l = 0;
  int trials = 0;
  int successes = 0;
};

/// Success proportion per L in {K, K+2, ..., floor(0.8 M)} with per-trial
/// instances shared across L values.
std::vector<LSensitivityPoint> l_sensitivity(Ensemble ensemble, Index n, Index m, Index k,
                                             int trials, std::uint64_t seed);

struct BestLCell {
  double delta = 0.0, rho = 0.0;
  Index m = 0, k = 0;
  Index best_l = 0;  // 0 when no L produced a single success
  int best_successes = 0;
  int trials = 0;
  bool skipped = false;
};

struct BestLTable {
  SweepConfig config;
  Index delta_count = 0;
  Index rho_count = 0;
  std::vector<BestLCell> cells;
};

/// For each grid cell, the L in {K, K+2, ..., M-1} with the most successes
/// (ties to the smallest L); cells where every L fails record best_l = 0.
BestLTable best_l_search(const SweepConfig& cfg);

/// Tree-sparse experiment on 32x32 patches: for each preset sampling rate
/// (ones per 4x4 tile) and tree count, recover signals supported on that
/// many random wavelet trees with partinv_wavelet. K = 21 * trees; cells are
/// stored with delta = rate and rho = K/M.
SweepGrid wavelet_experiment(const std::vector<int>& pattern_ones,
                             const std::vector<int>& tree_counts, int trials,
                             std::uint64_t seed);

/// CSV schema: delta,rho,M,K,L,trials,successes,mean_iters,mean_residual,skipped.
/// Rows ordered by delta index, then rho index. Configuration is echoed in
/// leading '#' comment lines.
void write_csv(const SweepGrid& grid, std::ostream& os);
void write_csv(const BestLTable& table, std::ostream& os);
void write_csv(const std::vector<LSensitivityPoint>& curve, Ensemble ensemble, Index n,
               Index m, Index k, int trials, std::uint64_t seed, std::ostream& os);

/// Binary P5 graymap, one pixel per cell: gray = round(255 * success
/// proportion), delta increasing rightward, rho increasing upward. Skipped
/// cells render as 0.
void render_heatmap(const SweepGrid& grid, const std::filesystem::path& path);

/// Worker threads used by sweeps: PARTINV_THREADS when set and positive,
/// otherwise the hardware concurrency.
int worker_count();

}  // namespace partinv::harness
