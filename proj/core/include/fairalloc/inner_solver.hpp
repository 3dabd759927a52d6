#pragma once

#include <vector>

#include "fairalloc/fairness.hpp"
#include "fairalloc/model.hpp"

namespace fairalloc {

struct SolverConfig {
  int max_iterations = 5000;
  double kkt_tolerance = 1e-8;
  double feasibility_tolerance = 1e-8;
  /// Minimum s_i kept strictly positive while iterating with alpha >= 1.
  double interior_margin = 1e-10;
  double backtracking = 0.5;  ///< step shrink factor, in (0, 1)
  double initial_step = 1.0;

  void validate() const;
};

/// Solution of the fixed-load problem J(l) = max_x Phi(s(x, l)).
struct InnerSolution {
  std::vector<double> x;
  double value = kNegInf;  ///< J(l); -inf when infeasible or degenerate
  bool feasible = false;
  double kkt_residual = 0.0;
  long iterations = 0;
  /// Some user had a zero upper bound (b_i <= p(l)) and was pinned at
  /// x_i = 0. With alpha >= 1 this forces value = -inf.
  bool degenerate_priced_out = false;
};

/// Per-user upper bounds making s_i >= 0 equivalent to 0 <= x_i <= ub_i
/// at price p(l): ub_i = max(0, 2 (b_i - p) / q_i), +inf when q_i = 0
/// and b_i > p.
std::vector<double> feasible_box(const Scenario& sc, double l);

/// Euclidean projection onto {x : sum x = l, 0 <= x <= ub}, by bisection
/// on the simplex multiplier. Throws when the set is empty (sum ub < l).
std::vector<double> project_box_simplex(const std::vector<double>& v, double l,
                                        const std::vector<double>& ub);

/// Solve the convex inner problem at fixed load l:
///   alpha = 0      exact water-filling (KKT bisection on the multiplier)
///   0 < alpha < inf projected gradient ascent with monotone line search
///   max-min        bisection on t with per-user feasibility intervals
/// Infeasibility (l > sum ub, or alpha >= 1 with no strictly interior
/// point) is reported in the result, not thrown.
InnerSolution solve_inner(const Scenario& sc, const FairnessParam& f, double l,
                          const SolverConfig& cfg = {});

/// As above, recording the objective value at every accepted iterate
/// (used by the monotonicity tests).
InnerSolution solve_inner(const Scenario& sc, const FairnessParam& f, double l,
                          const SolverConfig& cfg,
                          std::vector<double>* objective_trace);

/// The projected-gradient path on its own, valid for any finite alpha
/// including 0; exposed so tests can cross-check it against the exact
/// water-filling route.
InnerSolution solve_inner_projected_gradient(
    const Scenario& sc, const FairnessParam& f, double l,
    const SolverConfig& cfg = {}, std::vector<double>* objective_trace = nullptr);

}  // namespace fairalloc
