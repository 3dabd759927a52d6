#include "fairalloc/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Floor applied to surpluses inside pow() so gradients at a box corner
// stay finite; the line search then pulls the iterate back inside.
constexpr double kSurplusFloor = 1e-30;

struct Box {
  double p = 0.0;          // price at this load
  std::vector<double> ub;  // surplus-sign bounds, may contain +inf
  std::vector<double> ube; // min(ub, l): same feasible set, finite
  std::vector<std::size_t> active;  // users with ub > 0
  double sum_ube = 0.0;    // over active users
  double sum_ub = 0.0;     // uncapped; +inf when any bound is infinite
  bool any_priced_out = false;
};

Box make_box(const Scenario& sc, double l) {
  Box box;
  box.p = price(sc.cost, l);
  box.ub = feasible_box(sc, l);
  box.ube.resize(box.ub.size());
  for (std::size_t i = 0; i < box.ub.size(); ++i) {
    box.ube[i] = std::min(box.ub[i], l);
    if (box.ub[i] > 0.0) {
      box.active.push_back(i);
      box.sum_ube += box.ube[i];
      box.sum_ub += box.ub[i];
    } else {
      box.any_priced_out = true;
    }
  }
  return box;
}

double surplus_at(const QuadraticUtility& u, double x, double p) {
  return x * (-0.5 * u.q * x + u.b - p);
}

// Residual of the KKT system over {sum x = l, 0 <= x <= ub}: the smallest
// eps such that some multiplier nu satisfies |g_i - nu| <= eps on interior
// components, g_i <= nu + eps at lower bounds and g_i >= nu - eps at upper
// bounds.
double stationarity_residual(const std::vector<double>& x,
                             const std::vector<double>& g,
                             const std::vector<double>& ub, double l) {
  const double btol = 1e-9 * (1.0 + std::abs(l));
  double lo_req = -kInf;  // nu must be >= this
  double hi_req = kInf;   // nu must be <= this
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool at_lo = x[i] <= btol;
    const bool at_hi = ub[i] - x[i] <= btol;
    if (at_lo && at_hi) continue;
    if (at_lo) {
      lo_req = std::max(lo_req, g[i]);
    } else if (at_hi) {
      hi_req = std::min(hi_req, g[i]);
    } else {
      lo_req = std::max(lo_req, g[i]);
      hi_req = std::min(hi_req, g[i]);
    }
  }
  if (lo_req == -kInf || hi_req == kInf) return 0.0;
  return std::max(0.0, 0.5 * (lo_req - hi_req));
}

InnerSolution infeasible_solution(std::size_t n, bool degenerate) {
  InnerSolution sol;
  sol.x.assign(n, 0.0);
  sol.value = kNegInf;
  sol.feasible = false;
  sol.degenerate_priced_out = degenerate;
  return sol;
}

// Nudge the sum constraint to machine precision by moving one component
// with slack in the needed direction.
void fix_sum(std::vector<double>& x, const std::vector<double>& ub, double l) {
  double total = 0.0;
  for (double v : x) total += v;
  double r = l - total;
  if (r == 0.0) return;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double moved = std::clamp(x[i] + r, 0.0, ub[i]);
    const double applied = moved - x[i];
    x[i] = moved;
    r -= applied;
    if (r == 0.0) break;
  }
}

// ---------------------------------------------------------------------
// alpha = 0: exact water-filling. x_i(nu) = clamp((bt_i - nu)/q_i, 0, ub)
// with bt_i = b_i - p, nu found by bisection so that sum x = l.
// ---------------------------------------------------------------------
InnerSolution water_filling(const Scenario& sc, double l, const Box& box) {
  const std::size_t n = sc.n_users();
  std::vector<double> bt(n, 0.0);
  for (std::size_t i : box.active) bt[i] = sc.users[i].b - box.p;

  auto fill = [&](double nu, std::vector<double>& x) {
    double total = 0.0;
    for (std::size_t i : box.active) {
      const auto& u = sc.users[i];
      double xi;
      if (u.q > 0.0) {
        xi = std::clamp((bt[i] - nu) / u.q, 0.0, box.ube[i]);
      } else {
        xi = bt[i] > nu ? box.ube[i] : 0.0;
      }
      x[i] = xi;
      total += xi;
    }
    return total;
  };

  double nu_hi = -kInf, nu_lo = kInf;
  for (std::size_t i : box.active) {
    nu_hi = std::max(nu_hi, bt[i]);
    nu_lo = std::min(nu_lo, bt[i] - sc.users[i].q * box.ube[i] - 1.0);
  }
  std::vector<double> x_lo(n, 0.0), x_hi(n, 0.0), x(n, 0.0);
  double total_lo = fill(nu_lo, x_lo);  // >= l (everything at its bound)
  double total_hi = fill(nu_hi, x_hi);  // == 0 <= l
  long iters = 0;
  while (nu_hi - nu_lo > 1e-15 * (1.0 + std::abs(nu_hi) + std::abs(nu_lo)) &&
         iters < 200) {
    const double mid = 0.5 * (nu_lo + nu_hi);
    const double t = fill(mid, x);
    if (t >= l) {
      nu_lo = mid;
      x_lo = x;
      total_lo = t;
    } else {
      nu_hi = mid;
      x_hi = x;
      total_hi = t;
    }
    ++iters;
  }
  const double span = total_lo - total_hi;
  const double theta = span > 0.0 ? std::clamp((l - total_hi) / span, 0.0, 1.0)
                                  : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x_hi[i] + theta * (x_lo[i] - x_hi[i]);
  }
  fix_sum(x, box.ube, l);

  InnerSolution sol;
  sol.x = x;
  sol.feasible = true;
  sol.degenerate_priced_out = box.any_priced_out;
  sol.iterations = iters;
  double value = 0.0;
  std::vector<double> xa, ga, uba;
  for (std::size_t i : box.active) {
    value += std::max(0.0, surplus_at(sc.users[i], x[i], box.p));
    xa.push_back(x[i]);
    ga.push_back(bt[i] - sc.users[i].q * x[i]);
    uba.push_back(box.ube[i]);
  }
  sol.value = value;
  sol.kkt_residual = stationarity_residual(xa, ga, uba, l);
  return sol;
}

// ---------------------------------------------------------------------
// 0 < alpha < inf (also valid at 0, used for cross-checks): projected
// gradient ascent with a Barzilai-Borwein trial step and a monotone
// backtracking line search. For alpha >= 1 the line search additionally
// keeps every surplus at or above cfg.interior_margin.
// ---------------------------------------------------------------------
InnerSolution projected_gradient(const Scenario& sc, const FairnessParam& f,
                                 double l, const Box& box,
                                 const SolverConfig& cfg,
                                 std::vector<double>* trace) {
  const double a = f.value();
  const std::size_t n = sc.n_users();
  const std::size_t m = box.active.size();

  std::vector<double> q(m), bt(m), ub(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = box.active[k];
    q[k] = sc.users[i].q;
    bt[k] = sc.users[i].b - box.p;
    ub[k] = box.ube[i];
  }

  auto surpluses = [&](const std::vector<double>& x, std::vector<double>& s) {
    for (std::size_t k = 0; k < m; ++k) {
      s[k] = x[k] * (-0.5 * q[k] * x[k] + bt[k]);
    }
  };
  auto objective = [&](const std::vector<double>& s) {
    SurplusProfile clamped(s.size());
    for (std::size_t k = 0; k < m; ++k) clamped[k] = std::max(0.0, s[k]);
    return phi(clamped, f);
  };
  auto gradient = [&](const std::vector<double>& x, const std::vector<double>& s,
                      std::vector<double>& g) {
    for (std::size_t k = 0; k < m; ++k) {
      const double w =
          a == 0.0 ? 1.0 : std::pow(std::max(s[k], kSurplusFloor), -a);
      g[k] = w * (bt[k] - q[k] * x[k]);
    }
  };

  // Start strictly inside the box-simplex.
  std::vector<double> x(m);
  for (std::size_t k = 0; k < m; ++k) x[k] = l * ub[k] / box.sum_ube;

  std::vector<double> s(m), g(m), x_prev, g_prev, x_try(m), s_try(m), v(m);
  surpluses(x, s);
  double fval = objective(s);
  gradient(x, s, g);
  if (trace) trace->push_back(fval);

  InnerSolution sol;
  sol.feasible = true;
  sol.degenerate_priced_out = box.any_priced_out;

  double gnorm = 0.0;
  for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
  double step = cfg.initial_step / (1.0 + gnorm);
  int stall = 0;
  long it = 0;
  for (; it < cfg.max_iterations; ++it) {
    sol.kkt_residual = stationarity_residual(x, g, ub, l);
    if (sol.kkt_residual <= cfg.kkt_tolerance) break;

    // BB1 trial step from the previous accepted move.
    if (!x_prev.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double dx = x[k] - x_prev[k];
        const double dg = g_prev[k] - g[k];
        ss += dx * dx;
        sy += dx * dg;
      }
      if (sy > 0.0 && ss > 0.0) {
        step = ss / sy;
      } else {
        step *= 2.0;
      }
    }
    step = std::clamp(step, 1e-18, 1e18);

    bool accepted = false;
    double t = step;
    for (int ls = 0; ls < 90; ++ls) {
      for (std::size_t k = 0; k < m; ++k) v[k] = x[k] + t * g[k];
      x_try = project_box_simplex(v, l, ub);
      surpluses(x_try, s_try);
      bool ok = true;
      if (a >= 1.0) {
        for (std::size_t k = 0; k < m; ++k) {
          if (s_try[k] < cfg.interior_margin) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        const double f_try = objective(s_try);
        if (f_try > fval) {
          const double gain = f_try - fval;
          x_prev = x;
          g_prev = g;
          x = x_try;
          s = s_try;
          fval = f_try;
          gradient(x, s, g);
          if (trace) trace->push_back(fval);
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
  sol.iterations = it;
  sol.kkt_residual = stationarity_residual(x, g, ub, l);

  sol.x.assign(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) sol.x[box.active[k]] = x[k];
  fix_sum(sol.x, box.ube, l);
  sol.value = (box.any_priced_out && a >= 1.0) ? kNegInf : fval;
  return sol;
}

// ---------------------------------------------------------------------
// max-min: bisection on the epigraph variable t. For each user, s_i >= t
// is an interval in x_i (s_i is concave in x_i), so feasibility at t is
// sum lo <= l <= sum hi with every interval nonempty.
// ---------------------------------------------------------------------
struct Intervals {
  std::vector<double> lo, hi;
  double sum_lo = 0.0, sum_hi = 0.0;
  bool ok = false;
};

Intervals maxmin_intervals(const Scenario& sc, const Box& box, double t) {
  const std::size_t n = sc.n_users();
  Intervals iv;
  iv.lo.assign(n, 0.0);
  iv.hi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = sc.users[i];
    const double bt = u.b - box.p;
    double lo, hi;
    if (box.ub[i] <= 0.0) {
      if (t > 0.0) return iv;  // priced out, cannot reach positive surplus
      lo = hi = 0.0;
    } else if (t <= 0.0) {
      lo = 0.0;
      hi = box.ube[i];
    } else if (u.q > 0.0) {
      const double disc = bt * bt - 2.0 * u.q * t;
      if (disc < 0.0) return iv;
      const double root = std::sqrt(disc);
      lo = (bt - root) / u.q;
      hi = std::min((bt + root) / u.q, box.ube[i]);
      if (lo > hi) return iv;
    } else {
      lo = t / bt;
      hi = box.ube[i];
      if (lo > hi) return iv;
    }
    iv.lo[i] = lo;
    iv.hi[i] = hi;
    iv.sum_lo += lo;
    iv.sum_hi += hi;
  }
  iv.ok = true;
  return iv;
}

InnerSolution maxmin_solve(const Scenario& sc, double l, const Box& box,
                           std::vector<double>* trace) {
  const std::size_t n = sc.n_users();
  // Upper bound on the achievable minimum surplus.
  double t_hi = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = sc.users[i];
    const double bt = u.b - box.p;
    double cap;
    if (box.ub[i] <= 0.0) {
      cap = 0.0;
    } else if (u.q > 0.0) {
      cap = bt * bt / (2.0 * u.q);
    } else {
      cap = bt * box.ube[i];
    }
    t_hi = std::min(t_hi, cap);
  }

  auto feasible = [&](double t) {
    const Intervals iv = maxmin_intervals(sc, box, t);
    return iv.ok && iv.sum_lo <= l && l <= iv.sum_hi;
  };

  double t_lo = 0.0;
  long iters = 0;
  if (t_hi > 0.0) {
    if (feasible(t_hi)) {
      t_lo = t_hi;
    } else {
      while (t_hi - t_lo > 1e-15 * (1.0 + t_hi) && iters < 200) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (feasible(mid)) {
          t_lo = mid;
        } else {
          t_hi = mid;
        }
        ++iters;
      }
    }
  }

  const Intervals iv = maxmin_intervals(sc, box, t_lo);
  const double span = iv.sum_hi - iv.sum_lo;
  const double theta =
      span > 0.0 ? std::clamp((l - iv.sum_lo) / span, 0.0, 1.0) : 0.0;
  InnerSolution sol;
  sol.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.x[i] = iv.lo[i] + theta * (iv.hi[i] - iv.lo[i]);
  }
  fix_sum(sol.x, box.ube, l);
  sol.feasible = true;
  sol.degenerate_priced_out = box.any_priced_out;
  sol.iterations = iters;
  sol.kkt_residual = std::max(0.0, t_hi - t_lo);
  double vmin = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    vmin = std::min(vmin, std::max(0.0, surplus_at(sc.users[i], sol.x[i], box.p)));
  }
  sol.value = vmin;
  if (trace) trace->push_back(sol.value);
  return sol;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations <= 0) throw std::invalid_argument("max_iterations must be > 0");
  if (!(kkt_tolerance > 0.0)) throw std::invalid_argument("kkt_tolerance must be > 0");
  if (!(feasibility_tolerance > 0.0)) {
    throw std::invalid_argument("feasibility_tolerance must be > 0");
  }
  if (!(interior_margin > 0.0)) throw std::invalid_argument("interior_margin must be > 0");
  if (!(backtracking > 0.0 && backtracking < 1.0)) {
    throw std::invalid_argument("backtracking factor must be in (0, 1)");
  }
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial_step must be > 0");
}

std::vector<double> feasible_box(const Scenario& sc, double l) {
  if (l < 0.0) throw std::invalid_argument("feasible_box: l must be >= 0");
  const double p = price(sc.cost, l);
  std::vector<double> ub(sc.n_users());
  for (std::size_t i = 0; i < sc.n_users(); ++i) {
    const auto& u = sc.users[i];
    if (u.q > 0.0) {
      ub[i] = std::max(0.0, 2.0 * (u.b - p) / u.q);
    } else {
      ub[i] = u.b > p ? kInf : 0.0;
    }
  }
  return ub;
}

std::vector<double> project_box_simplex(const std::vector<double>& v, double l,
                                        const std::vector<double>& ub) {
  if (v.size() != ub.size()) {
    throw std::invalid_argument("project_box_simplex: size mismatch");
  }
  if (l < 0.0) throw std::invalid_argument("project_box_simplex: l must be >= 0");
  const std::size_t n = v.size();
  // Capping each bound at l leaves the feasible set unchanged (x_i <= l
  // in any feasible point) and removes infinities.
  std::vector<double> cap(n);
  double sum_cap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cap[i] = std::min(ub[i], l);
    if (cap[i] < 0.0) throw std::invalid_argument("project_box_simplex: ub < 0");
    sum_cap += cap[i];
  }
  if (sum_cap < l * (1.0 - 1e-12) - 1e-12) {
    throw std::domain_error("project_box_simplex: empty feasible set (sum ub < l)");
  }

  // Fast path: v already feasible.
  double sum_v = 0.0;
  bool in_box = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] < 0.0 || v[i] > cap[i]) {
      in_box = false;
      break;
    }
    sum_v += v[i];
  }
  if (in_box && std::abs(sum_v - l) <= 1e-12 * (1.0 + l)) return v;

  auto fill = [&](double nu, std::vector<double>& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::clamp(v[i] - nu, 0.0, cap[i]);
      total += x[i];
    }
    return total;
  };

  double nu_hi = -kInf;
  for (double vi : v) nu_hi = std::max(nu_hi, vi);  // total(nu_hi) == 0
  double nu_lo = nu_hi - 1.0;
  std::vector<double> x_lo(n), x_hi(n), x(n);
  double total_lo = fill(nu_lo, x_lo);
  for (int i = 0; i < 128 && total_lo < l; ++i) {
    nu_lo = nu_hi - 2.0 * (nu_hi - nu_lo);
    total_lo = fill(nu_lo, x_lo);
  }
  double total_hi = fill(nu_hi, x_hi);
  int it = 0;
  while (nu_hi - nu_lo > 1e-15 * (1.0 + std::abs(nu_hi) + std::abs(nu_lo)) &&
         it < 200) {
    const double mid = 0.5 * (nu_lo + nu_hi);
    const double t = fill(mid, x);
    if (t >= l) {
      nu_lo = mid;
      x_lo = x;
      total_lo = t;
    } else {
      nu_hi = mid;
      x_hi = x;
      total_hi = t;
    }
    ++it;
  }
  const double span = total_lo - total_hi;
  const double theta =
      span > 0.0 ? std::clamp((l - total_hi) / span, 0.0, 1.0) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x_hi[i] + theta * (x_lo[i] - x_hi[i]);
  }
  fix_sum(x, cap, l);
  return x;
}

InnerSolution solve_inner(const Scenario& sc, const FairnessParam& f, double l,
                          const SolverConfig& cfg) {
  return solve_inner(sc, f, l, cfg, nullptr);
}

InnerSolution solve_inner(const Scenario& sc, const FairnessParam& f, double l,
                          const SolverConfig& cfg,
                          std::vector<double>* objective_trace) {
  cfg.validate();
  sc.validate();
  if (l < 0.0) throw std::invalid_argument("solve_inner: l must be >= 0");
  const std::size_t n = sc.n_users();
  const bool needs_interior = !f.is_max_min() && f.value() >= 1.0;

  if (l == 0.0) {
    InnerSolution sol;
    sol.x.assign(n, 0.0);
    if (needs_interior) {
      sol.value = kNegInf;
      sol.feasible = false;
    } else {
      sol.value = 0.0;
      sol.feasible = true;
    }
    return sol;
  }

  const Box box = make_box(sc, l);
  if (box.sum_ub < l - cfg.feasibility_tolerance * (1.0 + l)) {
    return infeasible_solution(n, box.any_priced_out);
  }
  if (needs_interior && box.sum_ub <= l + 1e-12 * (1.0 + l)) {
    // Only the all-bounds point is feasible; every surplus is zero there.
    return infeasible_solution(n, box.any_priced_out);
  }

  if (f.is_max_min()) {
    return maxmin_solve(sc, l, box, objective_trace);
  }
  if (f.value() == 0.0) {
    InnerSolution sol = water_filling(sc, l, box);
    if (objective_trace) objective_trace->push_back(sol.value);
    return sol;
  }
  return projected_gradient(sc, f, l, box, cfg, objective_trace);
}

InnerSolution solve_inner_projected_gradient(const Scenario& sc,
                                             const FairnessParam& f, double l,
                                             const SolverConfig& cfg,
                                             std::vector<double>* objective_trace) {
  cfg.validate();
  sc.validate();
  if (f.is_max_min()) {
    throw std::invalid_argument("projected gradient path needs finite alpha");
  }
  if (l < 0.0) throw std::invalid_argument("solve_inner: l must be >= 0");
  const std::size_t n = sc.n_users();
  if (l == 0.0) {
    InnerSolution sol;
    sol.x.assign(n, 0.0);
    sol.value = f.value() >= 1.0 ? kNegInf : 0.0;
    sol.feasible = f.value() < 1.0;
    return sol;
  }
  const Box box = make_box(sc, l);
  if (box.sum_ub < l - cfg.feasibility_tolerance * (1.0 + l)) {
    return infeasible_solution(n, box.any_priced_out);
  }
  if (f.value() >= 1.0 && box.sum_ub <= l + 1e-12 * (1.0 + l)) {
    return infeasible_solution(n, box.any_priced_out);
  }
  return projected_gradient(sc, f, l, box, cfg, objective_trace);
}

}  // namespace fairalloc
