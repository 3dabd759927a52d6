#pragma once

#include <optional>
#include <vector>

#include "fairalloc/inner_solver.hpp"
#include "fairalloc/result.hpp"

namespace fairalloc {

struct OuterConfig {
  /// Grid step; unset means l_max / 200.
  std::optional<double> delta_l;
  /// Search cap; unset means default_l_max(scenario).
  std::optional<double> l_max;
  bool refine = true;
  /// Golden-section bracket width target; unset means 1e-6 * l_max.
  std::optional<double> refine_tolerance;
  bool unimodality_check = true;
};

struct GridPoint {
  double l = 0.0;
  double value = kNegInf;  // J(l)
  bool feasible = false;
};

struct UnimodalityReport {
  bool unimodal = true;
  /// Indices i where v[i] breaks the single-peak pattern (a rise after
  /// the peak, or a drop before it), at comparison tolerance 1e-9.
  std::vector<std::size_t> violations;
  std::size_t peak_index = 0;
};

struct GridSearchResult {
  /// Empty when every grid point is infeasible (or J == -inf throughout).
  std::optional<AllocationResult> best;
  std::vector<GridPoint> trace;
  std::optional<UnimodalityReport> unimodality;
  long inner_solves = 0;
};

/// Smallest load beyond which no user can have positive surplus:
/// (max_i b_i - c1) / c2 when c2 > 0, else the sum of the finite
/// per-user bounds at p = c1. Throws when that load is unbounded
/// (c2 = 0 and some q_i = 0 with b_i > c1).
double default_l_max(const Scenario& sc);

/// Algorithm: evaluate J(l) on {dl, 2 dl, ..., l_max}, keep the argmax
/// (first encountered on exact ties), record the full trace.
GridSearchResult grid_search(const Scenario& sc, const FairnessParam& f,
                             const OuterConfig& cfg = {},
                             const SolverConfig& solver = {});

/// Golden-section refinement inside a bracket from grid_search (the grid
/// argmax with one step on each side). Never returns a worse objective
/// than the bracket midpoint; falls back to it on bracket inconsistency.
AllocationResult golden_refine(const Scenario& sc, const FairnessParam& f,
                               double bracket_lo, double bracket_hi,
                               const OuterConfig& cfg = {},
                               const SolverConfig& solver = {});

/// Single-peak test of a grid trace: nondecreasing up to the (first)
/// argmax, then nonincreasing, with tolerance 1e-9 on each comparison.
UnimodalityReport check_unimodality(const std::vector<GridPoint>& trace);

/// grid_search followed by golden_refine when cfg.refine is set; the
/// returned best is never worse than the plain grid answer.
GridSearchResult solve_outer(const Scenario& sc, const FairnessParam& f,
                             const OuterConfig& cfg = {},
                             const SolverConfig& solver = {});

/// Direct solve of the joint problem over (x, l) for quadratic utilities
/// and quadratic cost, valid for alpha in {0, 1, max-min} where the
/// problem is jointly concave. l is eliminated through l = sum x.
/// alpha = 0 and alpha = 1 run projected gradient on the orthant; the
/// max-min case solves the equalized epigraph form (all surpluses equal
/// at the optimum when the price is strictly increasing) by nested
/// bisection. Throws on other fairness parameters or non-quadratic cost.
AllocationResult solve_joint_quadratic(const Scenario& sc,
                                       const FairnessParam& f,
                                       const SolverConfig& solver = {});

}  // namespace fairalloc
