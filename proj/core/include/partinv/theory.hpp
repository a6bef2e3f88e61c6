#pragma once

#include <cstdint>
#include <string>

#include "partinv/rng.hpp"
#include "partinv/sensing.hpp"
#include "partinv/types.hpp"

namespace partinv::theory {

/// Literal inequality slack; pass iff margin >= 0.
struct ConditionCheck {
  bool pass = false;
  double margin = 0.0;
};

enum class CheckModeKind { exhaustive, sampled };

struct CheckMode {
  CheckModeKind kind = CheckModeKind::exhaustive;
  int samples = 0;
  std::uint64_t seed = 1;

  static CheckMode exhaustive() { return {}; }
  static CheckMode sampled(int count, std::uint64_t seed = 1) {
    return {CheckModeKind::sampled, count, seed};
  }
};

/// Worst-case quantities over a family of column subsets I (|I| <= L) and
/// support subsets T1 (T1 subseteq T). The cross terms against the missed
/// support Phi_{I^c cap T} feed both the hypothesis checks and the derived
/// bound checks.
struct SubsetExtremes {
  double min_support_sigma = 0.0;   // min sigma_min(Phi_T1)
  double max_sigma = 0.0;           // max sigma_max(Phi_I)
  double max_inv_nonzero = 0.0;     // max 1/sigma_r(Phi_I), r = numeric rank
  double max_projection = 0.0;      // max ||Phi_I Phi_I^+ Phi_{I^c cap T}||
  double max_adjoint_cross = 0.0;   // max ||Phi_I^* Phi_{I^c cap T}||
  double max_pinv_cross = 0.0;      // max ||Phi_I^+ Phi_{I^c cap T}||
  int subsets_checked = 0;
};

/// Scan every nonempty I with |I| <= L (and every nonempty T1 subseteq T).
SubsetExtremes scan_subsets_exhaustive(const Matrix& phi, const IndexSet& t, Index l);

/// Scan `samples` random subsets plus every candidate set visited by a
/// partinv trace on the unit signal supported on T. Support subsets are
/// represented by T itself (sufficient by singular-value interlacing).
SubsetExtremes scan_subsets_sampled(const Matrix& phi, const IndexSet& t, Index l,
                                    int samples, std::uint64_t seed);

struct TheoremReport {
  double delta = 0.0;
  double a_bound = 0.0;
  Index k = 0;
  Index l = 0;
  ConditionCheck support_sigma_min;  // sigma_min(Phi_T1) >= 1 - delta
  ConditionCheck sigma_max_bound;    // sigma_max(Phi_I) <= A
  ConditionCheck pinv_norm_bound;    // 1/sigma_r(Phi_I) <= A
  ConditionCheck projection_bound;   // ||Phi_I Phi_I^+ Phi_{I^c cap T}|| <= delta/A
  CheckModeKind mode = CheckModeKind::exhaustive;
  SubsetExtremes extremes;
  bool k_warning = false;  // the K <= 3 regime is outside the selection argument

  bool all_pass() const {
    return support_sigma_min.pass && sigma_max_bound.pass && pinv_norm_bound.pass &&
           projection_bound.pass;
  }
  std::string to_text() const;  // flat key=value lines
};

/// Magnitude floor |c_i| >= 3 delta ||c||_2 on every support entry, plus
/// 0 < delta <= 1/(3 sqrt(K)). The margin is the magnitude-floor slack.
ConditionCheck check_signal(const sensing::SparseSignal& c, double delta);

/// Verify the dictionary hypotheses at level (delta, A) for subset bound L.
TheoremReport check_dictionary(const Matrix& phi, const IndexSet& t, Index l, double a,
                               double delta, const CheckMode& mode);

struct AppendixBounds {
  bool preconditions_hold = false;   // sigma/pinv/projection bounds at this I
  ConditionCheck adjoint_bound;      // ||Phi_I^* Phi_{I^c cap T}|| <= delta
  ConditionCheck pinv_bound;         // ||Phi_I^+ Phi_{I^c cap T}|| <= delta
};

/// Check the two bounds implied by the dictionary hypotheses on one concrete
/// subset I. When the hypotheses fail at I the implication is not claimed
/// and preconditions_hold is false.
AppendixBounds verify_appendix_bounds(const Matrix& phi, const IndexSet& i_set,
                                      const IndexSet& t, double delta, double a);

struct TheoremInstance {
  Matrix phi;
  sensing::SparseSignal signal;
  TheoremReport report;
  ConditionCheck signal_condition;
  double delta = 0.0;
  double a = 0.0;
  Index l = 0;
  bool certified = false;
  int candidates_tried = 0;
};

/// Rejection-sample perturbed near-orthogonal constructions until both the
/// signal and dictionary conditions verify exhaustively. Returns the best
/// candidate found (certified == false) when the budget runs out. Requires
/// n <= 32 and 1 <= a < sqrt(l).
TheoremInstance construct_theorem_instance(Index m, Index n, Index k, Index l, RngStream& rng,
                                           double a = 0.0, int budget = 10000);

}  // namespace partinv::theory
