#include "partinv/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "partinv/harness.hpp"
#include "partinv/linalg.hpp"
#include "partinv/matrix_io.hpp"
#include "partinv/recovery.hpp"
#include "partinv/sensing.hpp"
#include "partinv/theory.hpp"
#include "partinv/wavelet.hpp"

namespace partinv {

namespace {

using harness::Algorithm;
using harness::Ensemble;
using harness::LPolicy;

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << contents;
  if (!os) throw std::runtime_error("write failed: " + path);
}

void save_grid_outputs(const harness::SweepGrid& grid, const std::string& csv_path,
                       const std::string& pgm_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path + " for writing");
  harness::write_csv(grid, csv);
  if (!csv) throw std::runtime_error("write failed: " + csv_path);
  if (!pgm_path.empty()) harness::render_heatmap(grid, pgm_path);
}

// |C| clamped to [0,1], rendered as a side x side graymap
void save_correlation_pgm(const Matrix& map, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "P5\n" << map.cols() << ' ' << map.rows() << "\n255\n";
  for (Index i = 0; i < map.rows(); ++i) {
    for (Index j = 0; j < map.cols(); ++j) {
      const double v = std::min(1.0, std::abs(map(i, j)));
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Sparse recovery experiments with partial inversion"};
  app.require_subcommand(1);

  const std::map<std::string, Ensemble> ensembles{
      {"gaussian", Ensemble::gaussian}, {"correlated-block", Ensemble::correlated_block}};
  const std::map<std::string, Algorithm> algorithms{{"partinv", Algorithm::partinv},
                                                    {"cosamp", Algorithm::cosamp}};
  const std::map<std::string, LPolicy> policies{{"equal-K", LPolicy::equal_k},
                                                {"max-K-0.8M", LPolicy::max_k_08m},
                                                {"explicit", LPolicy::explicit_list}};

  int exit_code = 0;

  // phase-diagram
  {
    auto* sub = app.add_subcommand("phase-diagram", "Success-proportion sweep over (delta, rho)");
    sub->set_config("--config");
    auto cfg = std::make_shared<harness::SweepConfig>();
    auto csv_path = std::make_shared<std::string>("phase-diagram.csv");
    auto pgm_path = std::make_shared<std::string>("phase-diagram.pgm");
    auto l_list = std::make_shared<std::vector<long long>>();
    sub->add_option("--ensemble", cfg->ensemble, "matrix/signal ensemble")
        ->transform(CLI::CheckedTransformer(ensembles))
        ->default_str("gaussian");
    sub->add_option("--n", cfg->n, "signal length N")->check(CLI::PositiveNumber);
    sub->add_option("--trials", cfg->trials, "trials per cell")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg->seed, "sweep seed");
    sub->add_option("--algo", cfg->algorithm, "recovery algorithm")
        ->transform(CLI::CheckedTransformer(algorithms))
        ->default_str("partinv");
    sub->add_option("--l-policy", cfg->l_policy, "candidate-set size policy")
        ->transform(CLI::CheckedTransformer(policies))
        ->default_str("equal-K");
    sub->add_option("--l-list", *l_list, "explicit L per delta point")->delimiter(',');
    sub->add_option("--delta-grid", cfg->delta_grid, "delta values")->delimiter(',');
    sub->add_option("--rho-grid", cfg->rho_grid, "rho values")->delimiter(',');
    sub->add_option("--out-csv", *csv_path, "CSV output path");
    sub->add_option("--out-pgm", *pgm_path, "PGM heatmap path (empty to skip)");
    sub->callback([cfg, csv_path, pgm_path, l_list] {
      for (long long l : *l_list) cfg->l_list.push_back(static_cast<Index>(l));
      save_grid_outputs(harness::phase_diagram(*cfg), *csv_path, *pgm_path);
    });
  }

  // l-sensitivity
  {
    auto* sub = app.add_subcommand("l-sensitivity", "Success vs L at one (M, K)");
    sub->set_config("--config");
    auto ensemble = std::make_shared<Ensemble>(Ensemble::gaussian);
    auto n = std::make_shared<Index>(256);
    auto m = std::make_shared<Index>(0);
    auto k = std::make_shared<Index>(0);
    auto trials = std::make_shared<int>(25);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto csv_path = std::make_shared<std::string>("l-sensitivity.csv");
    sub->add_option("--ensemble", *ensemble, "matrix/signal ensemble")
        ->transform(CLI::CheckedTransformer(ensembles));
    sub->add_option("--n", *n, "signal length N")->check(CLI::PositiveNumber);
    sub->add_option("--m", *m, "measurement count M")->required()->check(CLI::PositiveNumber);
    sub->add_option("--k", *k, "sparsity K")->required()->check(CLI::PositiveNumber);
    sub->add_option("--trials", *trials, "trials per L")->check(CLI::PositiveNumber);
    sub->add_option("--seed", *seed, "sweep seed");
    sub->add_option("--out-csv", *csv_path, "CSV output path");
    sub->callback([ensemble, n, m, k, trials, seed, csv_path] {
      const auto curve = harness::l_sensitivity(*ensemble, *n, *m, *k, *trials, *seed);
      std::ofstream os(*csv_path);
      if (!os) throw std::runtime_error("cannot open " + *csv_path + " for writing");
      harness::write_csv(curve, *ensemble, *n, *m, *k, *trials, *seed, os);
    });
  }

  // best-l
  {
    auto* sub = app.add_subcommand("best-l", "Optimal L per (delta, rho) cell");
    sub->set_config("--config");
    auto cfg = std::make_shared<harness::SweepConfig>();
    cfg->trials = 100;
    auto csv_path = std::make_shared<std::string>("best-l.csv");
    sub->add_option("--ensemble", cfg->ensemble, "matrix/signal ensemble")
        ->transform(CLI::CheckedTransformer(ensembles));
    sub->add_option("--n", cfg->n, "signal length N")->check(CLI::PositiveNumber);
    sub->add_option("--trials", cfg->trials, "trials per (cell, L)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg->seed, "sweep seed");
    sub->add_option("--delta-grid", cfg->delta_grid, "delta values")->delimiter(',');
    sub->add_option("--rho-grid", cfg->rho_grid, "rho values")->delimiter(',');
    sub->add_option("--out-csv", *csv_path, "CSV output path");
    sub->callback([cfg, csv_path] {
      const auto table = harness::best_l_search(*cfg);
      std::ofstream os(*csv_path);
      if (!os) throw std::runtime_error("cannot open " + *csv_path + " for writing");
      harness::write_csv(table, os);
    });
  }

  // wavelet
  {
    auto* sub = app.add_subcommand("wavelet", "Tree-sparse recovery over sampling patterns");
    sub->set_config("--config");
    auto patterns = std::make_shared<std::vector<int>>(std::vector<int>{2, 4, 6, 8, 10, 12, 14});
    auto trees = std::make_shared<std::vector<int>>(std::vector<int>{1, 2, 3, 4, 5, 6});
    auto trials = std::make_shared<int>(100);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto csv_path = std::make_shared<std::string>("wavelet.csv");
    auto pgm_path = std::make_shared<std::string>("wavelet.pgm");
    sub->add_option("--patterns", *patterns, "ones per 4x4 tile (2,4,...,14)")->delimiter(',');
    sub->add_option("--trees", *trees, "active tree counts")->delimiter(',');
    sub->add_option("--trials", *trials, "trials per cell")->check(CLI::PositiveNumber);
    sub->add_option("--seed", *seed, "sweep seed");
    sub->add_option("--out-csv", *csv_path, "CSV output path");
    sub->add_option("--out-pgm", *pgm_path, "PGM heatmap path (empty to skip)");
    sub->callback([patterns, trees, trials, seed, csv_path, pgm_path] {
      save_grid_outputs(harness::wavelet_experiment(*patterns, *trees, *trials, *seed),
                        *csv_path, *pgm_path);
    });
  }

  // recover
  {
    auto* sub = app.add_subcommand("recover", "Recover one instance from files");
    auto phi_path = std::make_shared<std::string>();
    auto y_path = std::make_shared<std::string>();
    auto k = std::make_shared<Index>(0);
    auto l = std::make_shared<Index>(0);
    auto algo = std::make_shared<Algorithm>(Algorithm::partinv);
    auto use_richardson = std::make_shared<bool>(false);
    sub->add_option("--phi", *phi_path, "sensing matrix (.dmat)")->required();
    sub->add_option("--y", *y_path, "measurement vector (.vec)")->required();
    sub->add_option("--k", *k, "sparsity K")->required()->check(CLI::PositiveNumber);
    sub->add_option("--l", *l, "candidate-set size L (default K)");
    sub->add_option("--algo", *algo, "recovery algorithm")
        ->transform(CLI::CheckedTransformer(algorithms));
    sub->add_flag("--richardson", *use_richardson, "solve inner least squares by Richardson iteration");
    sub->callback([phi_path, y_path, k, l, algo, use_richardson] {
      const Matrix phi = io::load_dmat(*phi_path);
      const Vector y = io::load_vec(*y_path);
      recovery::RecoveryResult res;
      if (*algo == Algorithm::cosamp) {
        res = recovery::cosamp(phi, y, *k);
      } else {
        recovery::PartInvOptions opts;
        opts.subset_size = *l;
        if (*use_richardson) opts.solver = recovery::InnerSolver::richardson;
        res = recovery::partinv(phi, y, *k, opts);
      }
      std::cout << "support:";
      for (Index idx : res.support) std::cout << ' ' << idx;
      std::cout << '\n';
      std::cout << "iterations: " << res.iterations << '\n';
      std::cout << "residual: " << io::format_double(res.residual_norm) << '\n';
      std::cout << "termination: " << recovery::to_string(res.termination) << '\n';
    });
  }

  // correlation-map
  {
    auto* sub = app.add_subcommand(
        "correlation-map", "|Phi^T Phi| of a matrix or the built-in filtered-Haar instance");
    auto phi_path = std::make_shared<std::string>();
    auto n = std::make_shared<Index>(256);
    auto pgm_path = std::make_shared<std::string>("correlation-map.pgm");
    auto dmat_path = std::make_shared<std::string>();
    sub->add_option("--phi", *phi_path, "sensing matrix (.dmat); omit for the Haar demo");
    sub->add_option("--n", *n, "demo signal length (power of two)")->check(CLI::PositiveNumber);
    sub->add_option("--out", *pgm_path, "PGM output path");
    sub->add_option("--out-dmat", *dmat_path, "also save the map as .dmat");
    sub->callback([phi_path, n, pgm_path, dmat_path] {
      Matrix phi;
      if (!phi_path->empty()) {
        phi = io::load_dmat(*phi_path);
      } else {
        const Matrix sh = sensing::filter_downsample_1d(sensing::antialias_kernel_1d(), *n, 2);
        phi = sh * wavelet::haar_basis(*n);
      }
      const Matrix map = sensing::correlation_map(phi);
      save_correlation_pgm(map, *pgm_path);
      if (!dmat_path->empty()) io::save_dmat(map, *dmat_path);
    });
  }

  // check-theorem
  {
    auto* sub = app.add_subcommand("check-theorem", "Verify the exact-recovery hypotheses");
    auto n = std::make_shared<Index>(16);
    auto m = std::make_shared<Index>(12);
    auto k = std::make_shared<Index>(2);
    auto l = std::make_shared<Index>(2);
    auto mode = std::make_shared<std::string>("exhaustive");
    auto samples = std::make_shared<int>(500);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto a = std::make_shared<double>(0.0);
    auto delta = std::make_shared<double>(0.1);
    auto budget = std::make_shared<int>(10000);
    auto out_path = std::make_shared<std::string>();
    sub->add_option("--n", *n)->check(CLI::PositiveNumber);
    sub->add_option("--m", *m)->check(CLI::PositiveNumber);
    sub->add_option("--k", *k)->check(CLI::PositiveNumber);
    sub->add_option("--l", *l)->check(CLI::PositiveNumber);
    sub->add_option("--mode", *mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
    sub->add_option("--samples", *samples, "random subsets in sampled mode");
    sub->add_option("--seed", *seed);
    sub->add_option("--a", *a, "A bound (0 = default)");
    sub->add_option("--delta", *delta, "delta for sampled mode");
    sub->add_option("--budget", *budget, "candidate budget in exhaustive mode");
    sub->add_option("--out", *out_path, "also write the report to a file");
    sub->callback([n, m, k, l, mode, samples, seed, a, delta, budget, out_path] {
      std::string text;
      if (*mode == "exhaustive") {
        RngStream rng(*seed, {0x11ULL});
        const theory::TheoremInstance inst =
            theory::construct_theorem_instance(*m, *n, *k, *l, rng, *a, *budget);
        text = inst.report.to_text();
        text += "signal_pass=" + std::string(inst.signal_condition.pass ? "1" : "0") + "\n";
        text += "signal_margin=" + io::format_double(inst.signal_condition.margin) + "\n";
        text += "certified=" + std::string(inst.certified ? "1" : "0") + "\n";
        text += "candidates_tried=" + std::to_string(inst.candidates_tried) + "\n";
      } else {
        RngStream matrix_rng(*seed, {0x12ULL});
        const Matrix phi = sensing::gaussian_matrix(*m, *n, matrix_rng);
        RngStream support_rng(*seed, {0x13ULL});
        const IndexSet t = support_rng.sample_without_replacement(*n, *k);
        const double a_used = *a > 0.0 ? *a : 1.5;
        const theory::TheoremReport rep = theory::check_dictionary(
            phi, t, *l, a_used, *delta, theory::CheckMode::sampled(*samples, *seed));
        text = rep.to_text();
      }
      std::cout << text;
      if (!out_path->empty()) write_text_file(*out_path, text);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return exit_code;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace partinv
