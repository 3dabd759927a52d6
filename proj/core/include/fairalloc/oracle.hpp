#pragma once

#include <optional>

#include "fairalloc/inner_solver.hpp"
#include "fairalloc/result.hpp"

namespace fairalloc {

/// Brute-force reference optimizer for N <= 3. Kept deliberately
/// independent of the solver path: it derives its own bounds and grids
/// the (N-1)-dimensional simplex slice exhaustively.
struct OracleConfig {
  /// Points per free axis; 0 means auto (2000 for N <= 2, 200 for N = 3).
  int grid_resolution = 0;
  /// Outer grid points over l for the joint search.
  int l_resolution = 400;

  int resolve_grid(std::size_t n_users) const;
  void validate() const;
};

/// Exhaustive maximization of Phi over {sum x = l, 0 <= x <= ub}.
InnerSolution brute_force_inner(const Scenario& sc, const FairnessParam& f,
                                double l, const OracleConfig& cfg = {});

/// Outer grid over l in (0, l_max], inner brute force per point. Empty
/// when no grid point attains a finite objective.
std::optional<AllocationResult> brute_force_joint(const Scenario& sc,
                                                  const FairnessParam& f,
                                                  const OracleConfig& cfg = {});

}  // namespace fairalloc
