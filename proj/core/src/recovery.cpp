#include "partinv/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "partinv/linalg.hpp"

namespace partinv::recovery {

namespace {

Vector solve(const Matrix& a, const Vector& y, InnerSolver solver) {
  if (solver == InnerSolver::richardson) {
    return linalg::richardson_least_squares(a, y).x;
  }
  return linalg::qr_least_squares(a, y);
}

IndexSet complement(const IndexSet& sorted_set, Index n) {
  IndexSet out;
  out.reserve(static_cast<std::size_t>(n) - sorted_set.size());
  auto it = sorted_set.begin();
  for (Index i = 0; i < n; ++i) {
    if (it != sorted_set.end() && *it == i) {
      ++it;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

// Final K-sparse output: keep the K largest-magnitude entries of the last
// inverted estimate and re-solve least squares on that support.
RecoveryResult finalize(const Matrix& phi, const Vector& y, Index k,
                        const IndexSet& inverted_support, const Vector& inverted_values,
                        int iterations, Termination termination, InnerSolver solver) {
  const IndexSet local = select_top(inverted_values, k);
  IndexSet support;
  support.reserve(local.size());
  for (Index pos : local) support.push_back(inverted_support[static_cast<std::size_t>(pos)]);
  std::sort(support.begin(), support.end());

  const Matrix phi_k = linalg::columns(phi, support);
  const Vector xk = solve(phi_k, y, solver);

  RecoveryResult res;
  res.estimate = linalg::scatter(xk, support, phi.cols());
  res.support = std::move(support);
  res.iterations = iterations;
  res.residual_norm = (y - phi_k * xk).norm();
  res.termination = termination;
  return res;
}

void validate_common(const Matrix& phi, const Vector& y, Index k) {
  if (phi.size() == 0) throw std::invalid_argument("recovery: empty matrix");
  if (phi.rows() != y.size()) throw std::invalid_argument("recovery: dimension mismatch");
  if (phi.rows() > phi.cols()) throw std::invalid_argument("recovery: need M <= N");
  if (k < 1 || k > phi.cols()) throw std::invalid_argument("recovery: need 1 <= K <= N");
  linalg::ensure_finite(phi, "recovery");
  linalg::ensure_finite(y, "recovery");
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::residual_converged: return "residual-converged";
    case Termination::support_stagnated: return "support-stagnated";
    case Termination::max_iterations: return "max-iterations";
  }
  return "unknown";
}

IndexSet select_top(const Vector& v, Index count) {
  if (count < 0 || count > v.size()) {
    throw std::invalid_argument("select_top: count out of range");
  }
  IndexSet order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(v(a));
    const double mb = std::abs(v(b));
    if (ma != mb) return ma > mb;
    return a < b;  // ties to the lower index
  });
  IndexSet out(order.begin(), order.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> select_strongest_sets(const Vector& strengths,
                                         const std::vector<Index>& set_sizes, Index k_min) {
  if (strengths.size() != static_cast<Index>(set_sizes.size())) {
    throw std::invalid_argument("select_strongest_sets: strengths/sizes mismatch");
  }
  std::vector<Index> order(set_sizes.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (strengths(a) != strengths(b)) return strengths(a) > strengths(b);
    return a < b;
  });
  std::vector<Index> chosen;
  Index covered = 0;
  for (Index id : order) {
    if (covered >= k_min && !chosen.empty()) break;
    chosen.push_back(id);
    covered += set_sizes[static_cast<std::size_t>(id)];
  }
  if (covered < k_min) {
    throw std::invalid_argument("select_strongest_sets: sets cannot cover k_min indices");
  }
  return chosen;
}

bool success(const sensing::SparseSignal& c, const Vector& estimate) {
  if (c.values.size() != estimate.size()) {
    throw std::invalid_argument("success: length mismatch");
  }
  const double err = (c.values - estimate).squaredNorm() / static_cast<double>(c.n);
  return err < 1e-5;
}

RecoveryResult partinv(const Matrix& phi, const Vector& y, Index k,
                       const PartInvOptions& opts) {
  validate_common(phi, y, k);
  const Index m = phi.rows();
  const Index n = phi.cols();
  const Index l = opts.subset_size > 0 ? opts.subset_size : k;
  if (l < k || l >= m) throw std::invalid_argument("partinv: need K <= L < M");
  const int max_iter = opts.max_iterations > 0 ? opts.max_iterations
                                               : static_cast<int>(std::max<Index>(k, 30));
  const double stop_residual = opts.residual_tolerance * y.norm();

  Vector chat = phi.transpose() * y;
  IndexSet candidate = select_top(chat, l);

  IndexSet inverted_support;
  Vector inverted_values;
  int iterations = 0;
  Termination termination = Termination::max_iterations;

  for (int it = 1; it <= max_iter; ++it) {
    const Matrix phi_i = linalg::columns(phi, candidate);
    const Vector xi = solve(phi_i, y, opts.solver);
    const Vector r = y - phi_i * xi;

    chat.setZero();
    for (std::size_t p = 0; p < candidate.size(); ++p) {
      chat(candidate[p]) = xi(static_cast<Index>(p));
    }
    for (Index j : complement(candidate, n)) {
      chat(j) = phi.col(j).dot(r);
    }

    inverted_support = candidate;
    inverted_values = xi;
    iterations = it;

    if ((y - phi * chat).norm() <= stop_residual) {
      termination = Termination::residual_converged;
      break;
    }
    IndexSet next = select_top(chat, l);
    if (next == candidate) {
      termination = Termination::support_stagnated;
      break;
    }
    candidate = std::move(next);
  }

  return finalize(phi, y, k, inverted_support, inverted_values, iterations, termination,
                  opts.solver);
}

RecoveryResult partinv_wavelet(const Matrix& phi, const Vector& y, Index k,
                               const wavelet::TreePartition& partition,
                               const PartInvOptions& opts) {
  validate_common(phi, y, k);
  const Index n = phi.cols();
  if (partition.total() != n) {
    throw std::invalid_argument("partinv_wavelet: partition does not cover the columns");
  }
  const int max_iter = opts.max_iterations > 0 ? opts.max_iterations
                                               : static_cast<int>(std::max<Index>(k, 30));
  const double stop_residual = opts.residual_tolerance * y.norm();

  std::vector<Index> set_sizes(partition.sets.size());
  for (std::size_t j = 0; j < partition.sets.size(); ++j) {
    set_sizes[j] = static_cast<Index>(partition.sets[j].size());
  }
  const auto union_of = [&](const std::vector<Index>& set_ids) {
    IndexSet u;
    for (Index id : set_ids) {
      const IndexSet& s = partition.sets[static_cast<std::size_t>(id)];
      u.insert(u.end(), s.begin(), s.end());
    }
    std::sort(u.begin(), u.end());
    return u;
  };

  Vector chat = phi.transpose() * y;
  IndexSet candidate = union_of(select_strongest_sets(set_strength(chat, partition),
                                                      set_sizes, k));

  IndexSet inverted_support;
  Vector inverted_values;
  int iterations = 0;
  Termination termination = Termination::max_iterations;

  for (int it = 1; it <= max_iter; ++it) {
    const Matrix phi_i = linalg::columns(phi, candidate);
    const Vector xi = solve(phi_i, y, opts.solver);
    const Vector r = y - phi_i * xi;

    chat.setZero();
    for (std::size_t p = 0; p < candidate.size(); ++p) {
      chat(candidate[p]) = xi(static_cast<Index>(p));
    }
    for (Index j : complement(candidate, n)) {
      chat(j) = phi.col(j).dot(r);
    }

    inverted_support = candidate;
    inverted_values = xi;
    iterations = it;

    if ((y - phi * chat).norm() <= stop_residual) {
      termination = Termination::residual_converged;
      break;
    }
    IndexSet next = union_of(select_strongest_sets(set_strength(chat, partition),
                                                   set_sizes, k));
    if (next == candidate) {
      termination = Termination::support_stagnated;
      break;
    }
    candidate = std::move(next);
  }

  return finalize(phi, y, k, inverted_support, inverted_values, iterations, termination,
                  opts.solver);
}

RecoveryResult cosamp(const Matrix& phi, const Vector& y, Index k, int max_iterations) {
  validate_common(phi, y, k);
  const Index n = phi.cols();
  const int max_iter =
      max_iterations > 0 ? max_iterations : static_cast<int>(std::max<Index>(k, 30));
  const double stop_residual = 1e-7 * y.norm();

  IndexSet support;
  Vector residual = y;
  int iterations = 0;
  Termination termination = Termination::max_iterations;

  for (int it = 1; it <= max_iter; ++it) {
    const Vector proxy = phi.transpose() * residual;
    const IndexSet omega = select_top(proxy, std::min<Index>(2 * k, n));

    IndexSet merged;
    std::set_union(support.begin(), support.end(), omega.begin(), omega.end(),
                   std::back_inserter(merged));

    const Matrix phi_m = linalg::columns(phi, merged);
    const Vector b = linalg::qr_least_squares(phi_m, y);

    const IndexSet local = select_top(b, std::min<Index>(k, static_cast<Index>(merged.size())));
    IndexSet pruned;
    Vector pruned_values(static_cast<Index>(local.size()));
    for (std::size_t p = 0; p < local.size(); ++p) {
      pruned.push_back(merged[static_cast<std::size_t>(local[p])]);
      pruned_values(static_cast<Index>(p)) = b(local[p]);
    }

    residual = y - linalg::columns(phi, pruned) * pruned_values;
    iterations = it;

    if (residual.norm() <= stop_residual) {
      support = std::move(pruned);
      termination = Termination::residual_converged;
      break;
    }
    if (pruned == support) {
      termination = Termination::support_stagnated;
      break;
    }
    support = std::move(pruned);
  }

  const Matrix phi_k = linalg::columns(phi, support);
  const Vector xk = linalg::qr_least_squares(phi_k, y);
  RecoveryResult res;
  res.estimate = linalg::scatter(xk, support, n);
  res.support = support;
  res.iterations = iterations;
  res.residual_norm = (y - phi_k * xk).norm();
  res.termination = termination;
  return res;
}

}  // namespace partinv::recovery
