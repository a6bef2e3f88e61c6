#include "partinv/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "partinv/linalg.hpp"
#include "partinv/matrix_io.hpp"
#include "partinv/sensing.hpp"

namespace partinv::harness {

namespace {

constexpr Index kSubsets = 16;       // column groups of the correlated ensemble
constexpr Index kActiveSubsets = 4;  // groups carrying the clustered nonzeros
constexpr Index kWaveletSide = 32;
constexpr int kWaveletLevels = 5;
constexpr Index kTreeSize = 21;

// stream-id layout: (experiment, i, j, trial, role)
enum StreamExperiment : std::uint64_t { kPhase = 1, kLSens = 2, kBestL = 3, kWavelet = 4 };
enum StreamRole : std::uint64_t { kMatrixRole = 0, kSignalRole = 1 };

struct TrialOutcome {
  bool success = false;
  int iterations = 0;
  double residual = 0.0;
};

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Index derive_m(double delta, Index n) {
  return static_cast<Index>(std::lround(delta * static_cast<double>(n)));
}

Index derive_k(double rho, Index m) {
  return std::max<Index>(1, static_cast<Index>(std::lround(rho * static_cast<double>(m))));
}

Index policy_l(LPolicy policy, Index k, Index m, const std::vector<Index>& l_list, Index di) {
  switch (policy) {
    case LPolicy::equal_k:
      return k;
    case LPolicy::max_k_08m:
      return std::max(k, static_cast<Index>(0.8 * static_cast<double>(m)));
    case LPolicy::explicit_list:
      return l_list.at(static_cast<std::size_t>(di));
  }
  throw std::invalid_argument("unknown L policy");
}

Matrix build_matrix(Ensemble ensemble, Index m, Index n, RngStream& rng) {
  switch (ensemble) {
    case Ensemble::gaussian:
      return sensing::gaussian_matrix(m, n, rng);
    case Ensemble::correlated_block:
      return sensing::correlated_block_matrix(m, n, kSubsets, rng);
    case Ensemble::wavelet_tree:
      break;
  }
  throw std::invalid_argument("wavelet-tree instances are built by wavelet_experiment");
}

sensing::SparseSignal build_signal(Ensemble ensemble, Index n, Index k, RngStream& rng) {
  if (ensemble == Ensemble::correlated_block) {
    return sensing::clustered_sparse_signal(n, k, kSubsets, kActiveSubsets, rng);
  }
  return sensing::random_sparse_signal(n, k, rng);
}

void validate_config(const SweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (cfg.n < 1) throw std::invalid_argument("sweep: N must be positive");
  if (cfg.delta_grid.empty() || cfg.rho_grid.empty()) {
    throw std::invalid_argument("sweep: empty grid");
  }
  for (double d : cfg.delta_grid) {
    if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("sweep: delta must lie in (0,1)");
  }
  for (double r : cfg.rho_grid) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("sweep: rho must lie in (0,1)");
  }
  if (cfg.l_policy == LPolicy::explicit_list &&
      cfg.l_list.size() != cfg.delta_grid.size()) {
    throw std::invalid_argument("sweep: explicit L list needs one entry per delta point");
  }
  if (cfg.ensemble == Ensemble::wavelet_tree) {
    throw std::invalid_argument("sweep: use wavelet_experiment for the wavelet-tree ensemble");
  }
  if (cfg.algorithm == Algorithm::partinv_wavelet) {
    throw std::invalid_argument("sweep: partinv-wavelet runs under wavelet_experiment");
  }
}

bool cell_feasible(Ensemble ensemble, Index m, Index k, Index l, Index n) {
  if (m < 1 || m > n || k < 1 || k > l || l >= m) return false;
  if (ensemble == Ensemble::correlated_block &&
      (m < kSubsets || !sensing::clustered_signal_feasible(n, k, kSubsets, kActiveSubsets))) {
    return false;
  }
  return true;
}

TrialOutcome run_trial(const Matrix& phi, const sensing::SparseSignal& signal, Index k,
                       Index l, Algorithm algorithm) {
  const Vector y = phi * signal.values;
  recovery::RecoveryResult res;
  if (algorithm == Algorithm::partinv) {
    res = recovery::partinv(phi, y, k, recovery::PartInvOptions::with_subset_size(l));
  } else {
    res = recovery::cosamp(phi, y, k);
  }
  return {recovery::success(signal, res.estimate), res.iterations, res.residual_norm};
}

void aggregate(SweepCell& cell, const std::vector<TrialOutcome>& outcomes) {
  cell.trials = static_cast<int>(outcomes.size());
  double iter_sum = 0.0;
  double res_sum = 0.0;
  for (const TrialOutcome& o : outcomes) {
    cell.successes += o.success ? 1 : 0;
    iter_sum += o.iterations;
    res_sum += o.residual;
  }
  if (cell.trials > 0) {
    cell.mean_iterations = iter_sum / cell.trials;
    cell.mean_residual = res_sum / cell.trials;
  }
}

std::string csv_comment(const SweepConfig& cfg) {
  std::string out = "# ensemble=" + to_string(cfg.ensemble) +
                    " algorithm=" + to_string(cfg.algorithm) +
                    " n=" + std::to_string(cfg.n) + " trials=" + std::to_string(cfg.trials) +
                    " seed=" + std::to_string(cfg.seed) +
                    " l_policy=" + to_string(cfg.l_policy);
  return out;
}

}  // namespace

std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::gaussian: return "gaussian";
    case Ensemble::correlated_block: return "correlated-block";
    case Ensemble::wavelet_tree: return "wavelet-tree";
  }
  return "unknown";
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::partinv: return "partinv";
    case Algorithm::cosamp: return "cosamp";
    case Algorithm::partinv_wavelet: return "partinv-wavelet";
  }
  return "unknown";
}

std::string to_string(LPolicy p) {
  switch (p) {
    case LPolicy::equal_k: return "equal-K";
    case LPolicy::max_k_08m: return "max-K-0.8M";
    case LPolicy::explicit_list: return "explicit";
  }
  return "unknown";
}

std::vector<double> SweepConfig::default_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

const SweepCell& SweepGrid::at(Index di, Index ri) const {
  return cells.at(static_cast<std::size_t>(ri * delta_count + di));
}

int worker_count() {
  if (const char* env = std::getenv("PARTINV_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SweepGrid phase_diagram(const SweepConfig& cfg) {
  validate_config(cfg);

  SweepGrid grid;
  grid.config = cfg;
  grid.delta_count = static_cast<Index>(cfg.delta_grid.size());
  grid.rho_count = static_cast<Index>(cfg.rho_grid.size());
  grid.cells.resize(static_cast<std::size_t>(grid.delta_count * grid.rho_count));

  struct Task {
    Index di, ri, trial;
  };
  std::vector<Task> tasks;
  for (Index ri = 0; ri < grid.rho_count; ++ri) {
    for (Index di = 0; di < grid.delta_count; ++di) {
      SweepCell& cell = grid.cells[static_cast<std::size_t>(ri * grid.delta_count + di)];
      cell.delta = cfg.delta_grid[static_cast<std::size_t>(di)];
      cell.rho = cfg.rho_grid[static_cast<std::size_t>(ri)];
      cell.m = derive_m(cell.delta, cfg.n);
      cell.k = derive_k(cell.rho, cell.m);
      cell.l = policy_l(cfg.l_policy, cell.k, cell.m, cfg.l_list, di);
      if (!cell_feasible(cfg.ensemble, cell.m, cell.k, cell.l, cfg.n)) {
        cell.skipped = true;
        continue;
      }
      for (Index t = 0; t < cfg.trials; ++t) tasks.push_back({di, ri, t});
    }
  }

  std::vector<TrialOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const SweepCell& cell = grid.at(task.di, task.ri);
    RngStream matrix_rng(cfg.seed, {kPhase, static_cast<std::uint64_t>(task.di),
                                    static_cast<std::uint64_t>(task.ri),
                                    static_cast<std::uint64_t>(task.trial), kMatrixRole});
    RngStream signal_rng(cfg.seed, {kPhase, static_cast<std::uint64_t>(task.di),
                                    static_cast<std::uint64_t>(task.ri),
                                    static_cast<std::uint64_t>(task.trial), kSignalRole});
    const Matrix phi = build_matrix(cfg.ensemble, cell.m, cfg.n, matrix_rng);
    const sensing::SparseSignal signal = build_signal(cfg.ensemble, cfg.n, cell.k, signal_rng);
    outcomes[idx] = run_trial(phi, signal, cell.k, cell.l, cfg.algorithm);
  });

  // sequential reduce per cell in trial order
  std::vector<std::vector<TrialOutcome>> per_cell(grid.cells.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    per_cell[static_cast<std::size_t>(tasks[i].ri * grid.delta_count + tasks[i].di)]
        .push_back(outcomes[i]);
  }
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    if (!grid.cells[c].skipped) aggregate(grid.cells[c], per_cell[c]);
  }
  return grid;
}

std::vector<LSensitivityPoint> l_sensitivity(Ensemble ensemble, Index n, Index m, Index k,
                                             int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("l_sensitivity: trials must be >= 1");
  const Index l_max = static_cast<Index>(0.8 * static_cast<double>(m));
  if (k < 1 || k > l_max) throw std::invalid_argument("l_sensitivity: need 1 <= K <= 0.8M");

  std::vector<Index> l_values;
  for (Index l = k; l <= l_max; l += 2) l_values.push_back(l);

  std::vector<std::vector<bool>> success(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
    RngStream matrix_rng(seed, {kLSens, 0, 0, static_cast<std::uint64_t>(trial), kMatrixRole});
    RngStream signal_rng(seed, {kLSens, 0, 0, static_cast<std::uint64_t>(trial), kSignalRole});
    const Matrix phi = build_matrix(ensemble, m, n, matrix_rng);
    const sensing::SparseSignal signal = build_signal(ensemble, n, k, signal_rng);
    std::vector<bool>& row = success[trial];
    row.resize(l_values.size());
    for (std::size_t li = 0; li < l_values.size(); ++li) {
      row[li] = run_trial(phi, signal, k, l_values[li], Algorithm::partinv).success;
    }
  });

  std::vector<LSensitivityPoint> curve(l_values.size());
  for (std::size_t li = 0; li < l_values.size(); ++li) {
    curve[li].l = l_values[li];
    curve[li].trials = trials;
    for (int t = 0; t < trials; ++t) {
      curve[li].successes += success[static_cast<std::size_t>(t)][li] ? 1 : 0;
    }
  }
  return curve;
}

BestLTable best_l_search(const SweepConfig& cfg) {
  validate_config(cfg);

  BestLTable table;
  table.config = cfg;
  table.delta_count = static_cast<Index>(cfg.delta_grid.size());
  table.rho_count = static_cast<Index>(cfg.rho_grid.size());
  table.cells.resize(static_cast<std::size_t>(table.delta_count * table.rho_count));

  struct CellPlan {
    std::vector<Index> l_values;
    std::vector<int> successes;  // per L
  };
  std::vector<CellPlan> plans(table.cells.size());

  struct Task {
    Index di, ri, trial;
  };
  std::vector<Task> tasks;
  for (Index ri = 0; ri < table.rho_count; ++ri) {
    for (Index di = 0; di < table.delta_count; ++di) {
      const std::size_t ci = static_cast<std::size_t>(ri * table.delta_count + di);
      BestLCell& cell = table.cells[ci];
      cell.delta = cfg.delta_grid[static_cast<std::size_t>(di)];
      cell.rho = cfg.rho_grid[static_cast<std::size_t>(ri)];
      cell.m = derive_m(cell.delta, cfg.n);
      cell.k = derive_k(cell.rho, cell.m);
      cell.trials = cfg.trials;
      if (!cell_feasible(cfg.ensemble, cell.m, cell.k, cell.k, cfg.n)) {
        cell.skipped = true;
        continue;
      }
      for (Index l = cell.k; l < cell.m; l += 2) plans[ci].l_values.push_back(l);
      plans[ci].successes.assign(plans[ci].l_values.size(), 0);
      for (Index t = 0; t < cfg.trials; ++t) tasks.push_back({di, ri, t});
    }
  }

  std::vector<std::vector<bool>> outcomes(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const std::size_t ci = static_cast<std::size_t>(task.ri * table.delta_count + task.di);
    const BestLCell& cell = table.cells[ci];
    RngStream matrix_rng(cfg.seed, {kBestL, static_cast<std::uint64_t>(task.di),
                                    static_cast<std::uint64_t>(task.ri),
                                    static_cast<std::uint64_t>(task.trial), kMatrixRole});
    RngStream signal_rng(cfg.seed, {kBestL, static_cast<std::uint64_t>(task.di),
                                    static_cast<std::uint64_t>(task.ri),
                                    static_cast<std::uint64_t>(task.trial), kSignalRole});
    const Matrix phi = build_matrix(cfg.ensemble, cell.m, cfg.n, matrix_rng);
    const sensing::SparseSignal signal = build_signal(cfg.ensemble, cfg.n, cell.k, signal_rng);
    const std::vector<Index>& l_values = plans[ci].l_values;
    std::vector<bool>& row = outcomes[idx];
    row.resize(l_values.size());
    for (std::size_t li = 0; li < l_values.size(); ++li) {
      row[li] = run_trial(phi, signal, cell.k, l_values[li], Algorithm::partinv).success;
    }
  });

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::size_t ci =
        static_cast<std::size_t>(tasks[i].ri * table.delta_count + tasks[i].di);
    for (std::size_t li = 0; li < outcomes[i].size(); ++li) {
      plans[ci].successes[li] += outcomes[i][li] ? 1 : 0;
    }
  }
  for (std::size_t ci = 0; ci < table.cells.size(); ++ci) {
    BestLCell& cell = table.cells[ci];
    if (cell.skipped) continue;
    for (std::size_t li = 0; li < plans[ci].l_values.size(); ++li) {
      if (plans[ci].successes[li] > cell.best_successes) {
        cell.best_successes = plans[ci].successes[li];
        cell.best_l = plans[ci].l_values[li];  // ties keep the smaller L
      }
    }
  }
  return table;
}

SweepGrid wavelet_experiment(const std::vector<int>& pattern_ones,
                             const std::vector<int>& tree_counts, int trials,
                             std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("wavelet_experiment: trials must be >= 1");
  if (pattern_ones.empty() || tree_counts.empty()) {
    throw std::invalid_argument("wavelet_experiment: empty grid");
  }

  const Index side = kWaveletSide;
  const Index pixels = side * side;
  const wavelet::TreePartition partition = wavelet::tree_partition(side, kWaveletLevels);
  std::vector<Index> tree_set_ids;
  for (std::size_t j = 0; j < partition.roles.size(); ++j) {
    if (partition.roles[j] == wavelet::SetRole::tree) {
      tree_set_ids.push_back(static_cast<Index>(j));
    }
  }

  const Matrix psi = wavelet::daubechies5_basis_2d(side, kWaveletLevels);
  const Matrix blur = sensing::blur_operator_2d(side, sensing::near_delta_blur_kernel());
  const Matrix blurred_basis = blur * psi;

  SweepGrid grid;
  grid.config.ensemble = Ensemble::wavelet_tree;
  grid.config.algorithm = Algorithm::partinv_wavelet;
  grid.config.n = pixels;
  grid.config.trials = trials;
  grid.config.seed = seed;
  grid.config.delta_grid.clear();
  grid.config.rho_grid.clear();
  grid.delta_count = static_cast<Index>(pattern_ones.size());
  grid.rho_count = static_cast<Index>(tree_counts.size());
  grid.cells.resize(static_cast<std::size_t>(grid.delta_count * grid.rho_count));

  // the sampled rows of blur*psi, per pattern (S has one 1 per row)
  std::vector<Matrix> phis(pattern_ones.size());
  for (std::size_t pi = 0; pi < pattern_ones.size(); ++pi) {
    const sensing::SamplingPattern pattern = sensing::SamplingPattern::preset(pattern_ones[pi]);
    grid.config.delta_grid.push_back(pattern.rate());
    const Index m = pattern.ones_per_tile() * pattern.replication * pattern.replication;
    Matrix phi(m, pixels);
    Index row = 0;
    for (Index r = 0; r < side; ++r) {
      for (Index c = 0; c < side; ++c) {
        if (pattern.base[static_cast<std::size_t>(r % 4)][static_cast<std::size_t>(c % 4)]) {
          phi.row(row++) = blurred_basis.row(c * side + r);
        }
      }
    }
    phis[pi] = std::move(phi);
  }
  for (int t : tree_counts) {
    if (t < 1 || t > static_cast<int>(tree_set_ids.size())) {
      throw std::invalid_argument("wavelet_experiment: tree count out of range");
    }
    grid.config.rho_grid.push_back(static_cast<double>(t));  // echoes the K grid
  }

  struct Task {
    Index di, ri, trial;
  };
  std::vector<Task> tasks;
  for (Index ri = 0; ri < grid.rho_count; ++ri) {
    for (Index di = 0; di < grid.delta_count; ++di) {
      SweepCell& cell = grid.cells[static_cast<std::size_t>(ri * grid.delta_count + di)];
      const Index m = phis[static_cast<std::size_t>(di)].rows();
      const Index k = kTreeSize * tree_counts[static_cast<std::size_t>(ri)];
      cell.delta = grid.config.delta_grid[static_cast<std::size_t>(di)];
      cell.m = m;
      cell.k = k;
      cell.l = k;  // candidate sets grow to >= K whole sets
      cell.rho = static_cast<double>(k) / static_cast<double>(m);
      if (k >= m) {
        cell.skipped = true;
        continue;
      }
      for (Index t = 0; t < trials; ++t) tasks.push_back({di, ri, t});
    }
  }

  std::vector<TrialOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const SweepCell& cell = grid.at(task.di, task.ri);
    const Matrix& phi = phis[static_cast<std::size_t>(task.di)];
    RngStream signal_rng(seed, {kWavelet, static_cast<std::uint64_t>(task.di),
                                static_cast<std::uint64_t>(task.ri),
                                static_cast<std::uint64_t>(task.trial), kSignalRole});
    const int trees = static_cast<int>(cell.k / kTreeSize);
    const IndexSet picked = signal_rng.sample_without_replacement(
        static_cast<Index>(tree_set_ids.size()), trees);
    IndexSet support;
    for (Index p : picked) {
      const IndexSet& s = partition.sets[static_cast<std::size_t>(tree_set_ids[
          static_cast<std::size_t>(p)])];
      support.insert(support.end(), s.begin(), s.end());
    }
    std::sort(support.begin(), support.end());
    Vector values(static_cast<Index>(support.size()));
    for (Index i = 0; i < values.size(); ++i) values(i) = signal_rng.next_normal();
    const sensing::SparseSignal signal = sensing::make_sparse_signal(phi.cols(), support, values);

    const Vector y = phi * signal.values;
    const recovery::RecoveryResult res =
        recovery::partinv_wavelet(phi, y, cell.k, partition);
    outcomes[idx] = {recovery::success(signal, res.estimate), res.iterations,
                     res.residual_norm};
  });

  std::vector<std::vector<TrialOutcome>> per_cell(grid.cells.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    per_cell[static_cast<std::size_t>(tasks[i].ri * grid.delta_count + tasks[i].di)]
        .push_back(outcomes[i]);
  }
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    if (!grid.cells[c].skipped) aggregate(grid.cells[c], per_cell[c]);
  }
  return grid;
}

void write_csv(const SweepGrid& grid, std::ostream& os) {
  os << csv_comment(grid.config) << '\n';
  os << "delta,rho,M,K,L,trials,successes,mean_iters,mean_residual,skipped\n";
  for (Index di = 0; di < grid.delta_count; ++di) {
    for (Index ri = 0; ri < grid.rho_count; ++ri) {
      const SweepCell& cell = grid.at(di, ri);
      os << io::format_double(cell.delta) << ',' << io::format_double(cell.rho) << ','
         << cell.m << ',' << cell.k << ',' << cell.l << ',' << cell.trials << ','
         << cell.successes << ',' << io::format_double(cell.mean_iterations) << ','
         << io::format_double(cell.mean_residual) << ',' << (cell.skipped ? 1 : 0) << '\n';
    }
  }
}

void write_csv(const BestLTable& table, std::ostream& os) {
  os << csv_comment(table.config) << '\n';
  os << "delta,rho,M,K,best_L,best_successes,trials,skipped\n";
  for (Index di = 0; di < table.delta_count; ++di) {
    for (Index ri = 0; ri < table.rho_count; ++ri) {
      const BestLCell& cell =
          table.cells[static_cast<std::size_t>(ri * table.delta_count + di)];
      os << io::format_double(cell.delta) << ',' << io::format_double(cell.rho) << ','
         << cell.m << ',' << cell.k << ',' << cell.best_l << ',' << cell.best_successes
         << ',' << cell.trials << ',' << (cell.skipped ? 1 : 0) << '\n';
    }
  }
}

void write_csv(const std::vector<LSensitivityPoint>& curve, Ensemble ensemble, Index n,
               Index m, Index k, int trials, std::uint64_t seed, std::ostream& os) {
  os << "# ensemble=" << to_string(ensemble) << " n=" << n << " m=" << m << " k=" << k
     << " trials=" << trials << " seed=" << seed << '\n';
  os << "L,trials,successes\n";
  for (const LSensitivityPoint& p : curve) {
    os << p.l << ',' << p.trials << ',' << p.successes << '\n';
  }
}

void render_heatmap(const SweepGrid& grid, const std::filesystem::path& path) {
  if (grid.cells.empty()) throw std::invalid_argument("render_heatmap: empty grid");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "P5\n" << grid.delta_count << ' ' << grid.rho_count << "\n255\n";
  for (Index ri = grid.rho_count - 1; ri >= 0; --ri) {  // rho increases upward
    for (Index di = 0; di < grid.delta_count; ++di) {
      const SweepCell& cell = grid.at(di, ri);
      unsigned char gray = 0;
      if (!cell.skipped && cell.trials > 0) {
        gray = static_cast<unsigned char>(std::lround(
            255.0 * static_cast<double>(cell.successes) / static_cast<double>(cell.trials)));
      }
      os.put(static_cast<char>(gray));
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace partinv::harness
