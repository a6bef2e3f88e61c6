#include "partinv/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "partinv/linalg.hpp"
#include "partinv/matrix_io.hpp"
#include "partinv/recovery.hpp"

namespace partinv::theory {

namespace {

IndexSet set_difference_sorted(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// update extremes with the quantities evaluated at one subset I
void accumulate_subset(const Matrix& phi, const IndexSet& i_set, const IndexSet& t,
                       SubsetExtremes& ex) {
  const Matrix phi_i = linalg::columns(phi, i_set);
  const linalg::SvdFactors f = linalg::svd(phi_i);
  const double smax = f.singular_values(0);
  ex.max_sigma = std::max(ex.max_sigma, smax);
  if (f.numeric_rank > 0) {
    ex.max_inv_nonzero =
        std::max(ex.max_inv_nonzero, 1.0 / f.singular_values(f.numeric_rank - 1));
  } else {
    ex.max_inv_nonzero = std::numeric_limits<double>::infinity();
  }

  const IndexSet missed = set_difference_sorted(t, i_set);
  if (!missed.empty()) {
    const Matrix phi_missed = linalg::columns(phi, missed);
    const Matrix ut_phi = f.u.leftCols(f.numeric_rank).transpose() * phi_missed;
    // ||Phi_I Phi_I^+ X|| = ||U_r U_r^* X|| = ||U_r^* X||
    ex.max_projection = std::max(ex.max_projection, linalg::spectral_norm(ut_phi));
    ex.max_adjoint_cross =
        std::max(ex.max_adjoint_cross, linalg::spectral_norm(phi_i.transpose() * phi_missed));
    Matrix scaled = ut_phi.topRows(f.numeric_rank);
    for (Index r = 0; r < f.numeric_rank; ++r) scaled.row(r) /= f.singular_values(r);
    ex.max_pinv_cross = std::max(ex.max_pinv_cross, linalg::spectral_norm(scaled));
  }
  ++ex.subsets_checked;
}

void accumulate_support_subset(const Matrix& phi, const IndexSet& t1, SubsetExtremes& ex) {
  const double smin = linalg::min_singular_value(linalg::columns(phi, t1));
  ex.min_support_sigma = std::min(ex.min_support_sigma, smin);
}

// enumerate all size-s combinations of {0..n-1}
template <typename Fn>
void for_each_combination(Index n, Index s, Fn&& fn) {
  IndexSet comb(static_cast<std::size_t>(s));
  std::iota(comb.begin(), comb.end(), Index{0});
  while (true) {
    fn(const_cast<const IndexSet&>(comb));
    Index i = s - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < s; ++j) {
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

void validate_theorem_params(Index k, Index l, Index m, double a) {
  if (k < 1 || k > l || l >= m) throw std::invalid_argument("theory: need 1 <= K <= L < M");
  if (a < 1.0 || a * a >= static_cast<double>(l)) {
    throw std::invalid_argument("theory: need 1 <= A < sqrt(L)");
  }
}

}  // namespace

SubsetExtremes scan_subsets_exhaustive(const Matrix& phi, const IndexSet& t, Index l) {
  const Index n = phi.cols();
  SubsetExtremes ex;
  ex.min_support_sigma = std::numeric_limits<double>::infinity();
  for (Index s = 1; s <= static_cast<Index>(t.size()); ++s) {
    for_each_combination(static_cast<Index>(t.size()), s, [&](const IndexSet& pick) {
      IndexSet t1;
      for (Index p : pick) t1.push_back(t[static_cast<std::size_t>(p)]);
      accumulate_support_subset(phi, t1, ex);
    });
  }
  for (Index s = 1; s <= l; ++s) {
    for_each_combination(n, s, [&](const IndexSet& i_set) { accumulate_subset(phi, i_set, t, ex); });
  }
  return ex;
}

SubsetExtremes scan_subsets_sampled(const Matrix& phi, const IndexSet& t, Index l, int samples,
                                    std::uint64_t seed) {
  const Index n = phi.cols();
  SubsetExtremes ex;
  ex.min_support_sigma = std::numeric_limits<double>::infinity();
  accumulate_support_subset(phi, t, ex);

  std::set<IndexSet> seen;
  RngStream rng(seed, {0x7eULL});
  for (int s = 0; s < samples; ++s) {
    const Index size = 1 + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(l)));
    IndexSet i_set = rng.sample_without_replacement(n, size);
    if (seen.insert(i_set).second) accumulate_subset(phi, i_set, t, ex);
  }

  // adversarial subsets: the candidate sets a partinv run actually visits on
  // the unit signal supported on T
  if (l < phi.rows()) {
    Vector y = Vector::Zero(phi.rows());
    for (Index idx : t) y += phi.col(idx);
    Vector chat = phi.transpose() * y;
    IndexSet candidate = recovery::select_top(chat, l);
    const int trace_iters = static_cast<int>(std::max<Index>(static_cast<Index>(t.size()), 30));
    for (int it = 0; it < trace_iters; ++it) {
      if (seen.insert(candidate).second) accumulate_subset(phi, candidate, t, ex);
      const Matrix phi_i = linalg::columns(phi, candidate);
      const Vector xi = linalg::qr_least_squares(phi_i, y);
      const Vector r = y - phi_i * xi;
      chat.setZero();
      for (std::size_t p = 0; p < candidate.size(); ++p) {
        chat(candidate[p]) = xi(static_cast<Index>(p));
      }
      for (Index j = 0; j < n; ++j) {
        if (!std::binary_search(candidate.begin(), candidate.end(), j)) {
          chat(j) = phi.col(j).dot(r);
        }
      }
      IndexSet next = recovery::select_top(chat, l);
      if (next == candidate) break;
      candidate = std::move(next);
    }
  }
  return ex;
}

ConditionCheck check_signal(const sensing::SparseSignal& c, double delta) {
  if (c.support.empty()) throw std::invalid_argument("check_signal: zero signal");
  const double norm = c.values.norm();
  double min_mag = std::numeric_limits<double>::infinity();
  for (Index idx : c.support) min_mag = std::min(min_mag, std::abs(c.values(idx)));

  ConditionCheck check;
  check.margin = min_mag - 3.0 * delta * norm;
  const double delta_cap = 1.0 / (3.0 * std::sqrt(static_cast<double>(c.sparsity())));
  check.pass = (delta > 0.0) && (delta <= delta_cap) && (check.margin >= 0.0);
  return check;
}

TheoremReport check_dictionary(const Matrix& phi, const IndexSet& t, Index l, double a,
                               double delta, const CheckMode& mode) {
  if (t.empty()) throw std::invalid_argument("check_dictionary: empty support");
  if (!std::is_sorted(t.begin(), t.end())) {
    throw std::invalid_argument("check_dictionary: support must be sorted");
  }
  validate_theorem_params(static_cast<Index>(t.size()), l, phi.rows(), a);
  if (delta <= 0.0) throw std::invalid_argument("check_dictionary: delta must be positive");

  TheoremReport rep;
  rep.delta = delta;
  rep.a_bound = a;
  rep.k = static_cast<Index>(t.size());
  rep.l = l;
  rep.mode = mode.kind;
  rep.k_warning = rep.k <= 3;
  rep.extremes = mode.kind == CheckModeKind::exhaustive
                     ? scan_subsets_exhaustive(phi, t, l)
                     : scan_subsets_sampled(phi, t, l, mode.samples, mode.seed);

  rep.support_sigma_min.margin = rep.extremes.min_support_sigma - (1.0 - delta);
  rep.support_sigma_min.pass = rep.support_sigma_min.margin >= 0.0;
  rep.sigma_max_bound.margin = a - rep.extremes.max_sigma;
  rep.sigma_max_bound.pass = rep.sigma_max_bound.margin >= 0.0;
  rep.pinv_norm_bound.margin = a - rep.extremes.max_inv_nonzero;
  rep.pinv_norm_bound.pass = rep.pinv_norm_bound.margin >= 0.0;
  rep.projection_bound.margin = delta / a - rep.extremes.max_projection;
  rep.projection_bound.pass = rep.projection_bound.margin >= 0.0;
  return rep;
}

std::string TheoremReport::to_text() const {
  std::ostringstream os;
  const auto line = [&](const char* key, const std::string& value) {
    os << key << '=' << value << '\n';
  };
  line("delta", io::format_double(delta));
  line("a_bound", io::format_double(a_bound));
  line("k", std::to_string(k));
  line("l", std::to_string(l));
  line("mode", mode == CheckModeKind::exhaustive ? "exhaustive" : "sampled");
  line("subsets_checked", std::to_string(extremes.subsets_checked));
  line("support_sigma_min_pass", support_sigma_min.pass ? "1" : "0");
  line("support_sigma_min_margin", io::format_double(support_sigma_min.margin));
  line("sigma_max_pass", sigma_max_bound.pass ? "1" : "0");
  line("sigma_max_margin", io::format_double(sigma_max_bound.margin));
  line("pinv_norm_pass", pinv_norm_bound.pass ? "1" : "0");
  line("pinv_norm_margin", io::format_double(pinv_norm_bound.margin));
  line("projection_pass", projection_bound.pass ? "1" : "0");
  line("projection_margin", io::format_double(projection_bound.margin));
  line("worst_support_sigma_min", io::format_double(extremes.min_support_sigma));
  line("worst_sigma_max", io::format_double(extremes.max_sigma));
  line("worst_inv_nonzero_sigma", io::format_double(extremes.max_inv_nonzero));
  line("worst_projection", io::format_double(extremes.max_projection));
  line("k_warning", k_warning ? "1" : "0");
  line("all_pass", all_pass() ? "1" : "0");
  return os.str();
}

AppendixBounds verify_appendix_bounds(const Matrix& phi, const IndexSet& i_set,
                                      const IndexSet& t, double delta, double a) {
  if (i_set.empty()) throw std::invalid_argument("verify_appendix_bounds: empty subset");
  SubsetExtremes ex;
  ex.min_support_sigma = std::numeric_limits<double>::infinity();
  accumulate_subset(phi, i_set, t, ex);

  AppendixBounds out;
  out.preconditions_hold = ex.max_sigma <= a && ex.max_inv_nonzero <= a &&
                           ex.max_projection <= delta / a;
  if (!out.preconditions_hold) return out;

  out.adjoint_bound.margin = delta - ex.max_adjoint_cross;
  out.adjoint_bound.pass = out.adjoint_bound.margin >= 0.0;
  out.pinv_bound.margin = delta - ex.max_pinv_cross;
  out.pinv_bound.pass = out.pinv_bound.margin >= 0.0;
  return out;
}

TheoremInstance construct_theorem_instance(Index m, Index n, Index k, Index l, RngStream& rng,
                                           double a, int budget) {
  if (n > 32) throw std::invalid_argument("construct_theorem_instance: exhaustive mode needs N <= 32");
  if (m > n) throw std::invalid_argument("construct_theorem_instance: need M <= N");
  if (a <= 0.0) a = std::max(1.05, 0.9 * std::sqrt(static_cast<double>(l)));
  validate_theorem_params(k, l, m, a);

  const double delta_cap = 1.0 / (3.0 * std::sqrt(static_cast<double>(k)));
  const double epsilon = 0.02;  // perturbation scale off the orthogonal base

  TheoremInstance best;
  best.l = l;
  best.a = a;
  double best_gap = -std::numeric_limits<double>::infinity();

  for (int attempt = 1; attempt <= budget; ++attempt) {
    // random orthogonal basis of R^m via QR of a Gaussian draw
    Matrix gauss(m, m);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) gauss(i, j) = rng.next_normal();
    }
    Eigen::HouseholderQR<Matrix> qr(gauss);
    Matrix q = qr.householderQ() * Matrix::Identity(m, m);

    const IndexSet t = rng.sample_without_replacement(n, k);
    const IndexSet t_basis = rng.sample_without_replacement(m, k);

    // complement columns live in the span of the unused basis vectors; a
    // random rotation there spreads n-k columns over m-k directions
    IndexSet rest_basis;
    for (Index i = 0; i < m; ++i) {
      if (!std::binary_search(t_basis.begin(), t_basis.end(), i)) rest_basis.push_back(i);
    }
    const Matrix rest = linalg::columns(q, rest_basis);
    const Index rest_dim = static_cast<Index>(rest_basis.size());
    const Index rest_cols = n - k;
    Matrix frame(m, rest_cols);
    if (rest_cols > 0) {
      const Index fdim = std::max(rest_cols, rest_dim);
      Matrix fg(fdim, fdim);
      for (Index j = 0; j < fdim; ++j) {
        for (Index i = 0; i < fdim; ++i) fg(i, j) = rng.next_normal();
      }
      Eigen::HouseholderQR<Matrix> fqr(fg);
      const Matrix fq = fqr.householderQ() * Matrix::Identity(fdim, fdim);
      // first rest_dim rows of orthonormal columns form a near-tight frame
      frame = rest * fq.topLeftCorner(rest_dim, rest_cols);
    }

    Matrix phi(m, n);
    std::size_t t_pos = 0, r_pos = 0;
    for (Index j = 0; j < n; ++j) {
      if (t_pos < t.size() && t[t_pos] == j) {
        phi.col(j) = q.col(t_basis[t_pos]);
        ++t_pos;
      } else {
        phi.col(j) = frame.col(static_cast<Index>(r_pos));
        ++r_pos;
      }
    }
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < m; ++i) phi(i, j) += epsilon * rng.next_normal();
    }
    phi = linalg::normalize_columns(phi);

    Vector values(k);
    for (Index i = 0; i < k; ++i) values(i) = rng.next_normal();
    const sensing::SparseSignal signal = sensing::make_sparse_signal(n, t, values);

    const SubsetExtremes ex = scan_subsets_exhaustive(phi, t, l);
    double min_mag = std::numeric_limits<double>::infinity();
    for (Index idx : t) min_mag = std::min(min_mag, std::abs(signal.values(idx)));

    const double delta_low =
        std::max({1.0 - ex.min_support_sigma, a * ex.max_projection, 1e-12});
    const double delta_high =
        std::min(delta_cap, min_mag / (3.0 * signal.values.norm()));
    const bool a_ok = ex.max_sigma <= a && ex.max_inv_nonzero <= a;
    const double gap = delta_high - delta_low;

    if (a_ok && gap >= 0.0) {
      const double delta = 0.5 * (delta_low + delta_high);
      TheoremInstance inst;
      inst.phi = std::move(phi);
      inst.signal = signal;
      inst.delta = delta;
      inst.a = a;
      inst.l = l;
      inst.report = check_dictionary(inst.phi, t, l, a, delta, CheckMode::exhaustive());
      inst.signal_condition = check_signal(signal, delta);
      inst.certified = inst.report.all_pass() && inst.signal_condition.pass;
      inst.candidates_tried = attempt;
      if (inst.certified) return inst;
    }
    if (gap > best_gap) {
      best_gap = gap;
      best.phi = phi;
      best.signal = signal;
      best.delta = std::min(std::max(delta_low, 1e-12), delta_cap);
      best.candidates_tried = attempt;
      best.report = check_dictionary(best.phi, t, l, a, best.delta, CheckMode::exhaustive());
      best.signal_condition = check_signal(signal, best.delta);
      best.certified = false;
    }
  }
  best.candidates_tried = budget;
  return best;
}

}  // namespace partinv::theory
