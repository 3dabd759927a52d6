#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairalloc/outer_search.hpp"
#include "fairalloc/result.hpp"
#include "fairalloc/rng.hpp"

namespace fairalloc {

/// One alpha-sweep sample on (a portion of) the Pareto front.
struct ParetoPoint {
  FairnessParam alpha = FairnessParam::alpha(0.0);
  SurplusProfile s;
  std::vector<double> x;
  double l = 0.0;
  double total_surplus = 0.0;
  double min_surplus = 0.0;
  /// Relative total-surplus loss against the alpha=0 point of the same
  /// sweep; NaN when that anchor is absent.
  double pof = 0.0;
  /// Relative min-surplus loss against the max-min point of the same
  /// sweep; NaN when that anchor is absent.
  double poe = 0.0;
};

/// Runs the outer search once per fairness parameter and fills PoF/PoE
/// from the alpha=0 and max-min anchors of the same sweep. Entries are
/// empty for parameters whose search was globally infeasible.
std::vector<std::optional<ParetoPoint>> sweep_alpha(
    const Scenario& sc, const std::vector<FairnessParam>& alphas,
    const OuterConfig& cfg = {}, const SolverConfig& solver = {});

/// Definition-1 dominance: some candidate is componentwise >= s with at
/// least one strictly greater entry, at comparison tolerance 1e-9.
bool is_dominated(const SurplusProfile& s,
                  const std::vector<SurplusProfile>& candidates,
                  double tolerance = 1e-9);

/// Removes points whose surplus profile is dominated by another point in
/// the list; stable order, duplicates survive.
std::vector<ParetoPoint> pareto_filter(const std::vector<ParetoPoint>& points);

struct PfInequalityReport {
  double max_value = 0.0;  ///< max over samples of sum (s_i - s_pf) / s_pf
  std::vector<std::size_t> violations;
  std::size_t n_samples = 0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Proportional-fairness optimality check: for each sample, the
/// aggregated proportional change against s_pf must not exceed the
/// tolerance (it is <= 0 for the exact PF point).
PfInequalityReport check_pf_inequality(const SurplusProfile& s_pf,
                                       const std::vector<SurplusProfile>& samples,
                                       double tolerance = 1e-6);

struct DominationReport {
  std::size_t n_probes = 0;
  std::size_t dominating = 0;
  /// First few dominating surplus profiles, for inspection.
  std::vector<SurplusProfile> examples;
  bool passed = true;
};

/// Samples random feasible allocations (half global, half local jitters
/// around the result) and reports any whose surplus profile dominates
/// the result's, at a per-component tolerance.
DominationReport verify_pareto_optimality(const AllocationResult& result,
                                          const Scenario& sc,
                                          std::size_t n_probes,
                                          std::uint64_t seed = 0,
                                          double tolerance = 1e-6);

/// Draws a feasible (x, l): l uniform on (0, l_max], x by stick-breaking
/// scaled to l with rejection on box violations. Returns false when the
/// retry budget runs out (pathological scenarios only).
bool sample_feasible_allocation(const Scenario& sc, RngStream& rng,
                                double l_max, std::vector<double>& x,
                                double& l);

}  // namespace fairalloc
