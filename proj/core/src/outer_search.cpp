#include "fairalloc/outer_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCompareTol = 1e-9;  // unimodality comparison tolerance

AllocationResult make_result(const Scenario& sc, const FairnessParam& f,
                             std::vector<double> x, double l, double objective,
                             double kkt, long iterations, SolveMethod method) {
  AllocationResult r;
  r.alpha = f;
  for (double& xi : x) {
    if (xi < 0.0) xi = 0.0;
  }
  r.x = std::move(x);
  r.l = l;
  r.s = surplus_profile(sc, r.x, l);
  const double snoise = 1e-8 * (1.0 + std::abs(l));
  for (double& si : r.s) {
    if (si < 0.0 && si >= -snoise) si = 0.0;
  }
  r.objective = objective;
  r.kkt_residual = kkt;
  r.iterations = iterations;
  r.method = method;
  return r;
}

}  // namespace

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::GridInner: return "grid+inner";
    case SolveMethod::Joint: return "joint";
    case SolveMethod::Oracle: return "oracle";
  }
  return "unknown";
}

double default_l_max(const Scenario& sc) {
  sc.validate();
  const double c1 = sc.cost.c1;
  const double c2 = sc.cost.c2;
  double max_b = 0.0;
  for (const auto& u : sc.users) max_b = std::max(max_b, u.b);
  if (c2 > 0.0) {
    return std::max(0.0, (max_b - c1) / c2);
  }
  double total = 0.0;
  for (const auto& u : sc.users) {
    if (u.b <= c1) continue;
    if (u.q == 0.0) {
      throw std::domain_error(
          "default_l_max: unbounded feasible load (constant price, linear utility)");
    }
    total += 2.0 * (u.b - c1) / u.q;
  }
  return total;
}

GridSearchResult grid_search(const Scenario& sc, const FairnessParam& f,
                             const OuterConfig& cfg, const SolverConfig& solver) {
  const double l_max = cfg.l_max.value_or(default_l_max(sc));
  GridSearchResult out;
  if (!(l_max > 0.0)) return out;
  const double dl = cfg.delta_l.value_or(l_max / 200.0);
  if (!(dl > 0.0)) throw std::invalid_argument("grid_search: delta_l must be > 0");
  const long steps = static_cast<long>(std::floor(l_max / dl + 1e-9));

  double best_value = kNegInf;
  double best_l = 0.0;
  InnerSolution best_sol;
  out.trace.reserve(static_cast<std::size_t>(std::max(steps, 0L)));
  for (long k = 1; k <= steps; ++k) {
    const double l = dl * static_cast<double>(k);
    InnerSolution sol = solve_inner(sc, f, l, solver);
    out.trace.push_back(GridPoint{l, sol.value, sol.feasible});
    ++out.inner_solves;
    if (sol.value > best_value) {  // strict: first argmax wins ties
      best_value = sol.value;
      best_l = l;
      best_sol = std::move(sol);
    }
  }
  if (best_value > kNegInf) {
    out.best = make_result(sc, f, best_sol.x, best_l, best_sol.value,
                           best_sol.kkt_residual, best_sol.iterations,
                           SolveMethod::GridInner);
  }
  if (cfg.unimodality_check && out.trace.size() >= 3) {
    out.unimodality = check_unimodality(out.trace);
  }
  return out;
}

AllocationResult golden_refine(const Scenario& sc, const FairnessParam& f,
                               double bracket_lo, double bracket_hi,
                               const OuterConfig& cfg, const SolverConfig& solver) {
  double lo = std::max(0.0, bracket_lo);
  double hi = bracket_hi;
  const double mid = 0.5 * (lo + hi);

  double best_l = mid;
  InnerSolution best = solve_inner(sc, f, mid, solver);
  auto consider = [&](double l, const InnerSolution& sol) {
    if (sol.value > best.value) {
      best = sol;
      best_l = l;
    }
  };

  if (std::isfinite(lo) && std::isfinite(hi) && lo < hi) {
    double l_ref = hi;
    try {
      l_ref = cfg.l_max.value_or(default_l_max(sc));
    } catch (const std::exception&) {
      // keep the bracket width as the scale reference
    }
    const double tol =
        cfg.refine_tolerance.value_or(1e-6 * std::max(l_ref, hi - lo));
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    InnerSolution s1 = solve_inner(sc, f, x1, solver);
    InnerSolution s2 = solve_inner(sc, f, x2, solver);
    consider(x1, s1);
    consider(x2, s2);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      if (s1.value < s2.value) {
        lo = x1;
        x1 = x2;
        s1 = s2;
        x2 = lo + ratio * (hi - lo);
        s2 = solve_inner(sc, f, x2, solver);
        consider(x2, s2);
      } else {
        hi = x2;
        x2 = x1;
        s2 = s1;
        x1 = hi - ratio * (hi - lo);
        s1 = solve_inner(sc, f, x1, solver);
        consider(x1, s1);
      }
    }
  }
  return make_result(sc, f, best.x, best_l, best.value, best.kkt_residual,
                     best.iterations, SolveMethod::GridInner);
}

UnimodalityReport check_unimodality(const std::vector<GridPoint>& trace) {
  UnimodalityReport rep;
  if (trace.empty()) return rep;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].value > trace[peak].value) peak = i;
  }
  rep.peak_index = peak;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const double a = trace[i].value;
    const double b = trace[i + 1].value;
    const bool ok = i + 1 <= peak ? b >= a - kCompareTol : b <= a + kCompareTol;
    if (!ok) {
      rep.unimodal = false;
      rep.violations.push_back(i + 1);
    }
  }
  return rep;
}

GridSearchResult solve_outer(const Scenario& sc, const FairnessParam& f,
                             const OuterConfig& cfg, const SolverConfig& solver) {
  GridSearchResult out = grid_search(sc, f, cfg, solver);
  if (!out.best || !cfg.refine) return out;
  const double l_max = cfg.l_max.value_or(default_l_max(sc));
  const double dl = cfg.delta_l.value_or(l_max / 200.0);
  const double lo = std::max(0.0, out.best->l - dl);
  const double hi = std::min(l_max, out.best->l + dl);
  AllocationResult refined = golden_refine(sc, f, lo, hi, cfg, solver);
  if (refined.objective >= out.best->objective) {
    out.best = std::move(refined);
  }
  return out;
}

// ---------------------------------------------------------------------
// Joint solves for the concave cases. l is substituted by sum x
// throughout, leaving box-style constraints only.
// ---------------------------------------------------------------------
namespace {

void check_bounded(const Scenario& sc) {
  if (sc.cost.c2 > 0.0) return;
  for (const auto& u : sc.users) {
    if (u.q == 0.0 && u.b > sc.cost.c1) {
      throw std::domain_error(
          "solve_joint_quadratic: unbounded problem (constant price, linear utility)");
    }
  }
}

struct JointPg {
  std::vector<double> x;
  double objective = kNegInf;
  double kkt = 0.0;
  long iterations = 0;
};

// alpha = 0: maximize sum_i x_i(-q_i x_i / 2 + b_i) - L C'(L) over x >= 0.
JointPg joint_social_welfare(const Scenario& sc, const SolverConfig& cfg) {
  const std::size_t n = sc.n_users();
  const double c1 = sc.cost.c1, c2 = sc.cost.c2;

  auto objective = [&](const std::vector<double>& x) {
    double load = 0.0, util = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      load += x[i];
      util += x[i] * (-0.5 * sc.users[i].q * x[i] + sc.users[i].b);
    }
    return util - load * (c2 * load + c1);
  };
  auto gradient = [&](const std::vector<double>& x, std::vector<double>& g) {
    double load = 0.0;
    for (double xi : x) load += xi;
    const double mp = 2.0 * c2 * load + c1;  // d(L C'(L))/dL
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = sc.users[i].b - sc.users[i].q * x[i] - mp;
    }
  };
  auto residual = [&](const std::vector<double>& x, const std::vector<double>& g) {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r = std::max(r, x[i] > 1e-12 ? std::abs(g[i]) : std::max(0.0, g[i]));
    }
    return r;
  };

  JointPg out;
  std::vector<double> x(n, 0.0), g(n), x_try(n), x_prev, g_prev;
  double fval = objective(x);
  gradient(x, g);
  double gnorm = 0.0;
  for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
  double step = cfg.initial_step / (1.0 + gnorm);
  int stall = 0;
  long it = 0;
  for (; it < cfg.max_iterations; ++it) {
    out.kkt = residual(x, g);
    if (out.kkt <= cfg.kkt_tolerance) break;
    if (!x_prev.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - x_prev[i];
        const double dg = g_prev[i] - g[i];
        ss += dx * dx;
        sy += dx * dg;
      }
      step = (sy > 0.0 && ss > 0.0) ? ss / sy : step * 2.0;
    }
    step = std::clamp(step, 1e-18, 1e18);
    double t = step;
    bool accepted = false;
    for (int ls = 0; ls < 90; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_try[i] = std::max(0.0, x[i] + t * g[i]);
      const double f_try = objective(x_try);
      if (f_try > fval) {
        const double gain = f_try - fval;
        x_prev = x;
        g_prev = g;
        x = x_try;
        fval = f_try;
        gradient(x, g);
        stall = gain <= 1e-14 * (1.0 + std::abs(fval)) ? stall + 1 : 0;
        accepted = true;
        step = t;
        break;
      }
      t *= cfg.backtracking;
    }
    if (!accepted || stall >= 30) break;
  }
  out.kkt = residual(x, g);
  out.iterations = it;
  out.x = std::move(x);
  out.objective = fval;
  return out;
}

// alpha = 1: maximize sum_i log x_i + log(b_i - c1 - q_i x_i / 2 - c2 L)
// over the active users (those with b_i > c1).
JointPg joint_proportional_fair(const Scenario& sc, const SolverConfig& cfg,
                                const std::vector<std::size_t>& active) {
  const std::size_t m = active.size();
  const double c1 = sc.cost.c1, c2 = sc.cost.c2;
  std::vector<double> q(m), bc(m);
  for (std::size_t k = 0; k < m; ++k) {
    q[k] = sc.users[active[k]].q;
    bc[k] = sc.users[active[k]].b - c1;
  }

  auto margins = [&](const std::vector<double>& x, std::vector<double>& gm) {
    double load = 0.0;
    for (double xi : x) load += xi;
    bool ok = true;
    for (std::size_t k = 0; k < m; ++k) {
      gm[k] = bc[k] - 0.5 * q[k] * x[k] - c2 * load;
      if (gm[k] <= 0.0) ok = false;
    }
    return ok;
  };
  auto objective = [&](const std::vector<double>& x,
                       const std::vector<double>& gm) {
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      total += std::log(x[k]) + std::log(gm[k]);
    }
    return total;
  };
  auto gradient = [&](const std::vector<double>& x, const std::vector<double>& gm,
                      std::vector<double>& g) {
    double inv_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) inv_sum += 1.0 / gm[k];
    for (std::size_t k = 0; k < m; ++k) {
      g[k] = 1.0 / x[k] - 0.5 * q[k] / gm[k] - c2 * inv_sum;
    }
  };

  // Strictly feasible start: shrink a peak-shaped point until every
  // margin is comfortably positive.
  std::vector<double> x(m), gm(m);
  for (std::size_t k = 0; k < m; ++k) {
    x[k] = bc[k] / std::max(q[k], 1.0);
  }
  for (int guard = 0; guard < 200; ++guard) {
    bool ok = margins(x, gm);
    if (ok) {
      double worst = kInf;
      for (std::size_t k = 0; k < m; ++k) worst = std::min(worst, gm[k] / bc[k]);
      if (worst >= 1e-3) break;
    }
    for (double& xi : x) xi *= 0.5;
  }

  JointPg out;
  std::vector<double> g(m), x_try(m), gm_try(m), x_prev, g_prev;
  margins(x, gm);
  double fval = objective(x, gm);
  gradient(x, gm, g);
  double gnorm = 0.0;
  for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
  double step = cfg.initial_step / (1.0 + gnorm);
  int stall = 0;
  long it = 0;
  for (; it < cfg.max_iterations; ++it) {
    out.kkt = 0.0;
    for (double gi : g) out.kkt = std::max(out.kkt, std::abs(gi));
    if (out.kkt <= cfg.kkt_tolerance) break;
    if (!x_prev.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double dx = x[k] - x_prev[k];
        const double dg = g_prev[k] - g[k];
        ss += dx * dx;
        sy += dx * dg;
      }
      step = (sy > 0.0 && ss > 0.0) ? ss / sy : step * 2.0;
    }
    step = std::clamp(step, 1e-18, 1e18);
    double t = step;
    bool accepted = false;
    for (int ls = 0; ls < 90; ++ls) {
      bool ok = true;
      for (std::size_t k = 0; k < m; ++k) {
        x_try[k] = x[k] + t * g[k];
        if (x_try[k] <= 0.0) {
          ok = false;
          break;
        }
      }
      if (ok) ok = margins(x_try, gm_try);
      if (ok && cfg.interior_margin > 0.0) {
        for (std::size_t k = 0; k < m; ++k) {
          if (x_try[k] * gm_try[k] < cfg.interior_margin) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        const double f_try = objective(x_try, gm_try);
        if (f_try > fval) {
          const double gain = f_try - fval;
          x_prev = x;
          g_prev = g;
          x = x_try;
          gm = gm_try;
          fval = f_try;
          gradient(x, gm, g);
          stall = gain <= 1e-14 * (1.0 + std::abs(fval)) ? stall + 1 : 0;
          accepted = true;
          step = t;
          break;
        }
      }
      t *= cfg.backtracking;
    }
    if (!accepted || stall >= 30) break;
  }
  out.kkt = 0.0;
  for (double gi : g) out.kkt = std::max(out.kkt, std::abs(gi));
  out.iterations = it;
  out.x = std::move(x);
  out.objective = fval;
  return out;
}

// max-min with strictly increasing price: at the optimum every active
// surplus equals t and each x_i is the lower root of s_i = t (using a
// higher root or leaving slack would raise the price against everyone
// else). t(L) solves sum_i lo_i(t, L) = L; the peak of t(L) is where
// d(sum lo)/dL crosses 1, found by bisection on that analytic sign.
JointPg joint_maxmin_increasing_price(const Scenario& sc,
                                      const std::vector<std::size_t>& active) {
  const std::size_t m = active.size();
  const double c1 = sc.cost.c1, c2 = sc.cost.c2;
  std::vector<double> q(m), b(m);
  for (std::size_t k = 0; k < m; ++k) {
    q[k] = sc.users[active[k]].q;
    b[k] = sc.users[active[k]].b;
  }

  struct Eval {
    bool past = true;   // at or beyond the peak of t(L)
    double t = 0.0;
    double spread = 0.0;
  };

  auto sum_lo = [&](double t, double price_l) {
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double bt = b[k] - price_l;
      if (q[k] > 0.0) {
        const double disc = std::max(0.0, bt * bt - 2.0 * q[k] * t);
        total += (bt - std::sqrt(disc)) / q[k];
      } else {
        total += t / bt;
      }
    }
    return total;
  };

  auto evaluate = [&](double load) {
    Eval ev;
    const double price_l = c2 * load + c1;
    double t_cap = kInf;
    for (std::size_t k = 0; k < m; ++k) {
      const double bt = b[k] - price_l;
      if (bt <= 0.0) return ev;  // someone priced out: past the peak
      if (q[k] > 0.0) t_cap = std::min(t_cap, bt * bt / (2.0 * q[k]));
    }
    double t_hi = t_cap;
    if (!std::isfinite(t_hi)) {
      t_hi = 1.0;
      for (int guard = 0; guard < 200 && sum_lo(t_hi, price_l) < load; ++guard) {
        t_hi *= 2.0;
      }
    } else if (sum_lo(t_hi, price_l) < load) {
      return ev;  // equalization impossible: some user capped out
    }
    double t_lo = 0.0;
    for (int it = 0; it < 120 && t_hi - t_lo > 1e-16 * (1.0 + t_hi); ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      if (sum_lo(mid, price_l) <= load) {
        t_lo = mid;
      } else {
        t_hi = mid;
      }
    }
    ev.t = t_lo;
    ev.spread = t_hi - t_lo;
    double dlo_dL = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double bt = b[k] - price_l;
      if (q[k] > 0.0) {
        const double disc = bt * bt - 2.0 * q[k] * ev.t;
        if (disc <= 0.0) {
          dlo_dL = kInf;
          break;
        }
        dlo_dL += c2 * (bt / std::sqrt(disc) - 1.0) / q[k];
      } else {
        dlo_dL += c2 * ev.t / (bt * bt);
      }
    }
    ev.past = dlo_dL >= 1.0;
    return ev;
  };

  // Bisect on the peak indicator over (0, first priced-out load).
  double load_hi = kInf;
  for (std::size_t k = 0; k < m; ++k) {
    load_hi = std::min(load_hi, (b[k] - c1) / c2);
  }
  load_hi *= 1.0 - 1e-12;
  double load_lo = 0.0;
  long iters = 0;
  for (; iters < 120 && load_hi - load_lo > 1e-15 * (1.0 + load_hi); ++iters) {
    const double mid = 0.5 * (load_lo + load_hi);
    if (evaluate(mid).past) {
      load_hi = mid;
    } else {
      load_lo = mid;
    }
  }
  const double load = load_lo > 0.0 ? load_lo : load_hi;
  Eval ev = evaluate(load);
  const double price_l = c2 * load + c1;

  JointPg out;
  out.x.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double bt = b[k] - price_l;
    if (q[k] > 0.0) {
      const double disc = std::max(0.0, bt * bt - 2.0 * q[k] * ev.t);
      out.x[k] = (bt - std::sqrt(disc)) / q[k];
    } else {
      out.x[k] = ev.t / bt;
    }
  }
  out.objective = ev.t;
  out.kkt = ev.spread;
  out.iterations = iters;
  return out;
}

}  // namespace

AllocationResult solve_joint_quadratic(const Scenario& sc, const FairnessParam& f,
                                       const SolverConfig& solver) {
  sc.validate();
  solver.validate();
  if (sc.cost.variant != CostVariant::Quadratic) {
    throw std::invalid_argument("solve_joint_quadratic: cost must be quadratic");
  }
  const bool is_sw = !f.is_max_min() && f.value() == 0.0;
  const bool is_pf = !f.is_max_min() && f.value() == 1.0;
  if (!f.is_max_min() && !is_sw && !is_pf) {
    throw std::invalid_argument(
        "solve_joint_quadratic: alpha must be 0, 1, or max-min");
  }
  check_bounded(sc);
  const std::size_t n = sc.n_users();

  if (is_sw) {
    JointPg pg = joint_social_welfare(sc, solver);
    double load = 0.0;
    for (double xi : pg.x) load += xi;
    AllocationResult r = make_result(sc, f, pg.x, load, 0.0, pg.kkt,
                                     pg.iterations, SolveMethod::Joint);
    r.objective = phi(r.s, f);
    return r;
  }

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (sc.users[i].b > sc.cost.c1) active.push_back(i);
  }
  const bool degenerate = active.size() < n;

  if (is_pf) {
    std::vector<double> x(n, 0.0);
    double objective = kNegInf;
    double kkt = 0.0;
    long iterations = 0;
    if (!active.empty()) {
      JointPg pg = joint_proportional_fair(sc, solver, active);
      for (std::size_t k = 0; k < active.size(); ++k) x[active[k]] = pg.x[k];
      kkt = pg.kkt;
      iterations = pg.iterations;
    }
    double load = 0.0;
    for (double xi : x) load += xi;
    AllocationResult r = make_result(sc, f, x, load, objective, kkt, iterations,
                                     SolveMethod::Joint);
    r.objective = (degenerate || active.empty()) ? kNegInf : phi(r.s, f);
    return r;
  }

  // max-min
  std::vector<double> x(n, 0.0);
  double kkt = 0.0;
  long iterations = 0;
  if (!active.empty()) {
    if (sc.cost.c2 > 0.0) {
      JointPg pg = joint_maxmin_increasing_price(sc, active);
      for (std::size_t k = 0; k < active.size(); ++k) x[active[k]] = pg.x[k];
      kkt = pg.kkt;
      iterations = pg.iterations;
    } else {
      // Constant price: the users decouple; everyone sits at their peak.
      for (std::size_t i : active) {
        x[i] = (sc.users[i].b - sc.cost.c1) / sc.users[i].q;
      }
    }
  }
  double load = 0.0;
  for (double xi : x) load += xi;
  AllocationResult r =
      make_result(sc, f, x, load, 0.0, kkt, iterations, SolveMethod::Joint);
  r.objective = phi(r.s, f);
  return r;
}

}  // namespace fairalloc
