#include "fairalloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairalloc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool dominates(const SurplusProfile& cand, const SurplusProfile& s,
               double tol) {
  bool strict = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (cand[i] < s[i] - tol) return false;
    if (cand[i] > s[i] + tol) strict = true;
  }
  return strict;
}

}  // namespace

std::vector<std::optional<ParetoPoint>> sweep_alpha(
    const Scenario& sc, const std::vector<FairnessParam>& alphas,
    const OuterConfig& cfg, const SolverConfig& solver) {
  if (alphas.empty()) throw std::invalid_argument("sweep_alpha: empty alpha list");
  std::vector<std::optional<ParetoPoint>> points;
  points.reserve(alphas.size());
  for (const auto& f : alphas) {
    GridSearchResult out = solve_outer(sc, f, cfg, solver);
    if (!out.best) {
      points.emplace_back(std::nullopt);
      continue;
    }
    ParetoPoint pt;
    pt.alpha = f;
    pt.s = out.best->s;
    pt.x = out.best->x;
    pt.l = out.best->l;
    pt.total_surplus = out.best->total_surplus();
    pt.min_surplus = out.best->min_surplus();
    pt.pof = kNaN;
    pt.poe = kNaN;
    points.emplace_back(std::move(pt));
  }

  // Anchor values come from the same sweep.
  double system = kNaN, maxmin = kNaN;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!points[i]) continue;
    if (alphas[i].is_social_welfare() && std::isnan(system)) {
      system = points[i]->total_surplus;
    }
    if (alphas[i].is_max_min() && std::isnan(maxmin)) {
      maxmin = points[i]->min_surplus;
    }
  }
  for (auto& pt : points) {
    if (!pt) continue;
    if (!std::isnan(system) && system > 0.0) {
      pt->pof = price_of_fairness(system, pt->total_surplus);
    }
    if (!std::isnan(maxmin) && maxmin > 0.0) {
      pt->poe = price_of_efficiency(maxmin, pt->min_surplus);
    }
  }
  return points;
}

bool is_dominated(const SurplusProfile& s,
                  const std::vector<SurplusProfile>& candidates,
                  double tolerance) {
  for (const auto& cand : candidates) {
    if (cand.size() != s.size()) {
      throw std::invalid_argument("is_dominated: dimension mismatch");
    }
    if (dominates(cand, s, tolerance)) return true;
  }
  return false;
}

std::vector<ParetoPoint> pareto_filter(const std::vector<ParetoPoint>& points) {
  std::vector<ParetoPoint> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i != j && dominates(points[j].s, points[i].s, 1e-9)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(points[i]);
  }
  return kept;
}

PfInequalityReport check_pf_inequality(const SurplusProfile& s_pf,
                                       const std::vector<SurplusProfile>& samples,
                                       double tolerance) {
  for (double v : s_pf) {
    if (!(v > 0.0)) {
      throw std::domain_error("check_pf_inequality: s_pf must be strictly positive");
    }
  }
  PfInequalityReport rep;
  rep.tolerance = tolerance;
  rep.n_samples = samples.size();
  rep.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (s.size() != s_pf.size()) {
      throw std::invalid_argument("check_pf_inequality: dimension mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      total += (s[i] - s_pf[i]) / s_pf[i];
    }
    rep.max_value = std::max(rep.max_value, total);
    if (total > tolerance) rep.violations.push_back(k);
  }
  if (samples.empty()) rep.max_value = 0.0;
  rep.passed = rep.violations.empty();
  return rep;
}

bool sample_feasible_allocation(const Scenario& sc, RngStream& rng,
                                double l_max, std::vector<double>& x,
                                double& l) {
  const std::size_t n = sc.n_users();
  for (int attempt = 0; attempt < 64; ++attempt) {
    l = l_max * (1.0 - rng.uniform01());  // (0, l_max]
    const std::vector<double> ub = feasible_box(sc, l);
    double sum_ub = 0.0;
    for (double u : ub) sum_ub += std::min(u, l);
    if (sum_ub < l) continue;
    for (int inner = 0; inner < 256; ++inner) {
      // Stick-breaking weights (Dirichlet(1)-style) scaled to l.
      double total = 0.0;
      x.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = -std::log(1.0 - rng.uniform01());
        total += x[i];
      }
      if (total <= 0.0) continue;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] *= l / total;
        if (x[i] > ub[i]) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
  }
  return false;
}

DominationReport verify_pareto_optimality(const AllocationResult& result,
                                          const Scenario& sc,
                                          std::size_t n_probes,
                                          std::uint64_t seed,
                                          double tolerance) {
  DominationReport rep;
  rep.n_probes = n_probes;
  RngStream rng = substream(seed, 0x9a7e70u);
  const double l_max = default_l_max(sc);
  const std::size_t n = sc.n_users();

  std::vector<double> x(n);
  double l = 0.0;
  for (std::size_t k = 0; k < n_probes; ++k) {
    bool have = false;
    if (k % 2 == 0) {
      have = sample_feasible_allocation(sc, rng, l_max, x, l);
    } else {
      // Local jitter around the result, re-projected into the box.
      const double scale = 0.05 * (1.0 + result.l);
      l = std::clamp(result.l + scale * (2.0 * rng.uniform01() - 1.0), 0.0, l_max);
      const std::vector<double> ub = feasible_box(sc, l);
      double sum_ub = 0.0;
      for (double u : ub) sum_ub += std::min(u, l);
      if (sum_ub >= l) {
        for (std::size_t i = 0; i < n; ++i) {
          x[i] = std::max(0.0, result.x[i] +
                                   scale * (2.0 * rng.uniform01() - 1.0));
        }
        x = project_box_simplex(x, l, ub);
        have = true;
      }
    }
    if (!have) continue;
    SurplusProfile s = surplus_profile(sc, x, l);
    for (double& v : s) v = std::max(0.0, v);
    if (dominates(s, result.s, tolerance)) {
      ++rep.dominating;
      if (rep.examples.size() < 8) rep.examples.push_back(s);
    }
  }
  rep.passed = rep.dominating == 0;
  return rep;
}

}  // namespace fairalloc
