#include "fairalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The oracle derives bounds from the surplus sign condition on its own;
// it must not share the solver's machinery.
std::vector<double> oracle_bounds(const Scenario& sc, double l) {
  const double p = sc.cost.c2 * l + sc.cost.c1;
  std::vector<double> ub(sc.n_users());
  for (std::size_t i = 0; i < sc.n_users(); ++i) {
    const auto& u = sc.users[i];
    if (u.q > 0.0) {
      ub[i] = std::max(0.0, 2.0 * (u.b - p) / u.q);
    } else {
      ub[i] = u.b > p ? kInf : 0.0;
    }
    ub[i] = std::min(ub[i], l);
  }
  return ub;
}

double phi_at(const Scenario& sc, const FairnessParam& f,
              const std::vector<double>& x, double l) {
  SurplusProfile s = surplus_profile(sc, x, l);
  for (double& v : s) v = std::max(0.0, v);
  return phi(s, f);
}

}  // namespace

int OracleConfig::resolve_grid(std::size_t n_users) const {
  if (grid_resolution > 0) return grid_resolution;
  return n_users <= 2 ? 2000 : 200;
}

void OracleConfig::validate() const {
  if (grid_resolution != 0 && grid_resolution < 2) {
    throw std::invalid_argument("oracle grid_resolution must be >= 2");
  }
  if (l_resolution < 2) {
    throw std::invalid_argument("oracle l_resolution must be >= 2");
  }
}

InnerSolution brute_force_inner(const Scenario& sc, const FairnessParam& f,
                                double l, const OracleConfig& cfg) {
  sc.validate();
  cfg.validate();
  const std::size_t n = sc.n_users();
  if (n > 3) throw std::invalid_argument("brute_force_inner: N must be <= 3");
  if (l < 0.0) throw std::invalid_argument("brute_force_inner: l must be >= 0");

  const int res = cfg.resolve_grid(n);
  const std::vector<double> ub = oracle_bounds(sc, l);
  const double slack = 1e-12 * (1.0 + l);

  InnerSolution sol;
  sol.x.assign(n, 0.0);
  sol.value = kNegInf;
  sol.feasible = false;

  double best = kNegInf;
  bool found = false;
  std::vector<double> x(n, 0.0), best_x(n, 0.0);
  long evals = 0;

  auto consider = [&](const std::vector<double>& cand) {
    ++evals;
    const double v = phi_at(sc, f, cand, l);
    if (!found || v > best) {
      best = v;
      best_x = cand;
    }
    found = true;
  };

  // A sub-range can come out inverted by a hair when it is a single
  // forced point; pin it rather than stepping backwards.
  auto segment = [&](double lo, double hi, double& width) {
    if (lo > hi) hi = lo;
    width = hi - lo;
    return lo;
  };

  if (n == 1) {
    if (l <= ub[0] + slack) {
      x[0] = std::min(l, ub[0]);
      consider(x);
    }
  } else if (n == 2) {
    const double lo = std::max(0.0, l - ub[1]);
    const double hi = std::min(ub[0], l);
    if (lo <= hi + slack) {
      double width = 0.0;
      const double base = segment(lo, hi, width);
      for (int k = 0; k <= res; ++k) {
        x[0] = base + width * k / res;
        x[1] = std::clamp(l - x[0], 0.0, ub[1]);
        consider(x);
      }
    }
  } else {
    const double lo0 = std::max(0.0, l - ub[1] - ub[2]);
    const double hi0 = std::min(ub[0], l);
    if (lo0 <= hi0 + slack) {
      double width0 = 0.0;
      const double base0 = segment(lo0, hi0, width0);
      for (int k0 = 0; k0 <= res; ++k0) {
        x[0] = base0 + width0 * k0 / res;
        const double rest = std::max(0.0, l - x[0]);
        const double lo1 = std::max(0.0, rest - ub[2]);
        const double hi1 = std::min(ub[1], rest);
        if (lo1 > hi1 + slack) continue;
        double width1 = 0.0;
        const double base1 = segment(lo1, hi1, width1);
        for (int k1 = 0; k1 <= res; ++k1) {
          x[1] = base1 + width1 * k1 / res;
          x[2] = std::clamp(rest - x[1], 0.0, ub[2]);
          consider(x);
        }
      }
    }
  }

  sol.iterations = evals;
  if (found) {
    sol.feasible = true;
    sol.value = best;
    sol.x = best_x;
  }
  return sol;
}

std::optional<AllocationResult> brute_force_joint(const Scenario& sc,
                                                  const FairnessParam& f,
                                                  const OracleConfig& cfg) {
  sc.validate();
  cfg.validate();
  if (sc.n_users() > 3) {
    throw std::invalid_argument("brute_force_joint: N must be <= 3");
  }

  // Own copy of the load cap derivation.
  double l_max = 0.0;
  if (sc.cost.c2 > 0.0) {
    double max_b = 0.0;
    for (const auto& u : sc.users) max_b = std::max(max_b, u.b);
    l_max = std::max(0.0, (max_b - sc.cost.c1) / sc.cost.c2);
  } else {
    for (const auto& u : sc.users) {
      if (u.b <= sc.cost.c1) continue;
      if (u.q == 0.0) {
        throw std::domain_error("brute_force_joint: unbounded feasible load");
      }
      l_max += 2.0 * (u.b - sc.cost.c1) / u.q;
    }
  }
  if (!(l_max > 0.0)) return std::nullopt;

  double best = kNegInf;
  double best_l = 0.0;
  std::vector<double> best_x;
  long evals = 0;
  for (int k = 1; k <= cfg.l_resolution; ++k) {
    const double l = l_max * k / cfg.l_resolution;
    InnerSolution inner = brute_force_inner(sc, f, l, cfg);
    evals += inner.iterations;
    if (inner.feasible && inner.value > best) {
      best = inner.value;
      best_l = l;
      best_x = inner.x;
    }
  }
  if (best == kNegInf) return std::nullopt;

  AllocationResult r;
  r.alpha = f;
  r.x = best_x;
  r.l = best_l;
  r.s = surplus_profile(sc, best_x, best_l);
  for (double& v : r.s) v = std::max(0.0, v);
  r.objective = best;
  r.kkt_residual = std::numeric_limits<double>::quiet_NaN();
  r.iterations = evals;
  r.method = SolveMethod::Oracle;
  return r;
}

}  // namespace fairalloc
