// Acceptance suite: end-to-end checks of the solver stack at fixed seeds
// and tolerances. Prints one PASS/FAIL line per criterion and exits with
// the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fairalloc/analysis.hpp"
#include "fairalloc/experiments.hpp"
#include "fairalloc/oracle.hpp"
#include "fairalloc/outer_search.hpp"
#include "fairalloc/scenario_gen.hpp"
#include "fairalloc/scenario_io.hpp"

using namespace fairalloc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

const std::vector<FairnessParam> kAllParams = {
    FairnessParam::alpha(0), FairnessParam::alpha(0.5), FairnessParam::alpha(1),
    FairnessParam::alpha(2), FairnessParam::max_min()};

Scenario reference_two_user() {
  Scenario sc;
  sc.users = {QuadraticUtility(2, 3), QuadraticUtility(2, 6)};
  sc.cost = CostModel::quadratic(1, 0);
  return sc;
}

Scenario seeded_population(std::uint64_t seed, int n) {
  RandomSpec spec;
  spec.family = ScenarioFamily::PofPoe;
  spec.seed = seed;
  spec.n_users = n;
  return gen_pofpoe_users(spec);
}

std::string fmt(double v) { return format_double(v); }

// 1. Solver objective vs exhaustive oracle on 50 seeded two-user
//    populations with p(l) = l, all five fairness parameters, two-sided
//    agreement within 1e-3 * (1 + |objective|).
Outcome criterion_oracle_equivalence() {
  Outcome out;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    Scenario sc = seeded_population(10000 + k, 2);
    for (const auto& f : kAllParams) {
      auto solver = solve_outer(sc, f);
      auto oracle = brute_force_joint(sc, f);
      if (!solver.best || !oracle) {
        out.pass = false;
        out.detail = "missing solution at alpha=" + f.to_string();
        return out;
      }
      const double js = solver.best->objective;
      const double jo = oracle->objective;
      const bool ok = js >= jo - 1e-3 * (1.0 + std::abs(jo)) &&
                      jo >= js - 1e-3 * (1.0 + std::abs(js));
      worst = std::max(worst, std::abs(js - jo) / (1.0 + std::abs(jo)));
      if (!ok) {
        out.pass = false;
        out.detail = "scenario " + std::to_string(k) + " alpha=" +
                     f.to_string() + " solver=" + fmt(js) + " oracle=" + fmt(jo);
        return out;
      }
    }
  }
  out.detail = "50 scenarios x 5 alphas, worst relative gap " + fmt(worst);
  return out;
}

// 2. Joint concave solve vs grid+refine on 100 random quadratic
//    scenarios for alpha in {0, 1, max-min}.
Outcome criterion_joint_cross_check() {
  Outcome out;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Scenario sc = seeded_population(20000 + k, 2 + k % 7);
    for (const auto& f : {FairnessParam::alpha(0), FairnessParam::alpha(1),
                          FairnessParam::max_min()}) {
      auto grid = solve_outer(sc, f);
      auto joint = solve_joint_quadratic(sc, f);
      if (!grid.best) {
        out.pass = false;
        out.detail = "grid infeasible at scenario " + std::to_string(k);
        return out;
      }
      const double a = grid.best->objective, b = joint.objective;
      const double rel = std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
      worst = std::max(worst, rel);
      if (rel > 1e-3) {
        out.pass = false;
        out.detail = "scenario " + std::to_string(k) + " alpha=" + f.to_string() +
                     " grid=" + fmt(a) + " joint=" + fmt(b);
        return out;
      }
    }
  }
  out.detail = "100 scenarios x 3 alphas, worst relative gap " + fmt(worst);
  return out;
}

// 3. Two-user sweep with p(l) = l: total surplus strictly decreasing,
//    minimum surplus strictly increasing in alpha, max-min equalized.
Outcome criterion_two_user_orderings() {
  Outcome out;
  auto pts = sweep_alpha(reference_two_user(), kAllParams);
  for (const auto& p : pts) {
    if (!p) {
      out.pass = false;
      out.detail = "sweep point missing";
      return out;
    }
  }
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (!(pts[k]->total_surplus < pts[k - 1]->total_surplus)) {
      out.pass = false;
      out.detail = "total surplus not strictly decreasing at step " +
                   std::to_string(k);
      return out;
    }
    if (!(pts[k]->min_surplus > pts[k - 1]->min_surplus)) {
      out.pass = false;
      out.detail = "min surplus not strictly increasing at step " +
                   std::to_string(k);
      return out;
    }
  }
  const auto& mm = pts.back();
  const double gap = std::abs(mm->s[0] - mm->s[1]);
  if (gap > 1e-4) {
    out.pass = false;
    out.detail = "max-min surpluses differ by " + fmt(gap);
    return out;
  }
  out.detail = "orderings hold; max-min |s1-s2| = " + fmt(gap);
  return out;
}

// Shared scenario set for criteria 4 and 5.
std::vector<Scenario> lemma_scenarios() {
  std::vector<Scenario> out;
  for (int k = 0; k < 20; ++k) {
    out.push_back(seeded_population(30000 + k, 2 + k % 4));
  }
  return out;
}

// 4. Aggregated proportional change against the PF point is <= 1e-6
//    over 1000 random feasible surplus profiles per scenario.
Outcome criterion_pf_inequality() {
  Outcome out;
  double worst = -1e300;
  auto scenarios = lemma_scenarios();
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    const Scenario& sc = scenarios[k];
    auto pf = solve_outer(sc, FairnessParam::alpha(1));
    if (!pf.best) {
      out.pass = false;
      out.detail = "PF solve infeasible at scenario " + std::to_string(k);
      return out;
    }
    RngStream rng = substream(40000 + k, 1);
    std::vector<SurplusProfile> samples;
    std::vector<double> x;
    double l = 0.0;
    const double cap = default_l_max(sc);
    while (samples.size() < 1000) {
      if (!sample_feasible_allocation(sc, rng, cap, x, l)) continue;
      auto s = surplus_profile(sc, x, l);
      for (double& v : s) v = std::max(0.0, v);
      samples.push_back(std::move(s));
    }
    auto rep = check_pf_inequality(pf.best->s, samples, 1e-6);
    worst = std::max(worst, rep.max_value);
    if (!rep.passed) {
      out.pass = false;
      out.detail = "scenario " + std::to_string(k) + " max aggregated change " +
                   fmt(rep.max_value);
      return out;
    }
  }
  out.detail = "20 scenarios x 1000 samples, max aggregated change " + fmt(worst);
  return out;
}

// 5. No random feasible profile dominates a swept optimum
//    (10000 probes per point, componentwise tolerance 1e-6).
Outcome criterion_non_domination() {
  Outcome out;
  auto scenarios = lemma_scenarios();
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    for (const auto& f : kAllParams) {
      auto best = solve_outer(scenarios[k], f);
      if (!best.best) {
        out.pass = false;
        out.detail = "solve infeasible at scenario " + std::to_string(k);
        return out;
      }
      auto rep = verify_pareto_optimality(*best.best, scenarios[k], 10000,
                                          50000 + k, 1e-6);
      if (!rep.passed) {
        out.pass = false;
        out.detail = "scenario " + std::to_string(k) + " alpha=" + f.to_string() +
                     ": " + std::to_string(rep.dominating) + " dominating probes";
        return out;
      }
    }
  }
  out.detail = "20 scenarios x 5 alphas x 10000 probes, zero dominations";
  return out;
}

// 6. PoF and PoE at alpha = 1 grow with the population size by more than
//    twice the standard error of the difference; every PoF stays below 1.
Outcome criterion_pofpoe_scaling() {
  Outcome out;
  PofPoeOptions opts;
  opts.n_users_list = {5, 10, 20};
  opts.trials = 100;
  opts.alphas = {FairnessParam::alpha(0), FairnessParam::alpha(1),
                 FairnessParam::max_min()};
  opts.seed = 60000;
  long failures = 0;
  auto records = collect_pofpoe_records(opts, failures);
  if (failures != 0) {
    out.pass = false;
    out.detail = std::to_string(failures) + " trial failures";
    return out;
  }
  auto stats_at = [&](int n, auto metric) {
    std::vector<double> vals;
    for (const auto& r : records) {
      if (r.n_users == n && r.alpha.is_proportional_fair()) {
        vals.push_back(metric(r));
      }
    }
    return compute_summary(std::move(vals));
  };
  for (const char* which : {"pof", "poe"}) {
    const bool pof = std::string(which) == "pof";
    auto metric = [pof](const PofPoeRecord& r) { return pof ? r.pof : r.poe; };
    auto s5 = stats_at(5, metric);
    auto s20 = stats_at(20, metric);
    const double se = std::sqrt(
        s5.stddev * s5.stddev / static_cast<double>(s5.count) +
        s20.stddev * s20.stddev / static_cast<double>(s20.count));
    const double diff = s20.mean - s5.mean;
    if (!(diff > 2.0 * se)) {
      out.pass = false;
      out.detail = std::string(which) + " growth " + fmt(diff) +
                   " not above 2 SE = " + fmt(2.0 * se);
      return out;
    }
    out.detail += std::string(which) + ": mean(N=20)-mean(N=5) = " + fmt(diff) +
                  " vs 2SE " + fmt(2.0 * se) + "; ";
  }
  for (const auto& r : records) {
    if (std::isfinite(r.pof) && r.pof >= 1.0) {
      out.pass = false;
      out.detail = "PoF reached 1 at N=" + std::to_string(r.n_users);
      return out;
    }
  }
  out.detail += "all PoF < 1";
  return out;
}

// 7. Two-class experiment: SW favors class 2, PF narrows the gap, and
//    class-1 users gain allocation moving SW -> PF.
Outcome criterion_two_class() {
  Outcome out;
  TwoClassOptions opts;
  opts.trials = 200;
  opts.seed = 70000;
  long failures = 0;
  auto records = collect_twoclass_records(opts, failures);
  if (failures != 0) {
    out.pass = false;
    out.detail = std::to_string(failures) + " trial failures";
    return out;
  }
  int trials_sw_ordered = 0, trials_gap_narrowed = 0;
  long class1_users = 0, class1_gainers = 0;
  for (int t = 0; t < opts.trials; ++t) {
    double sw1 = 0, sw2 = 0, pf1 = 0, pf2 = 0;
    int n1 = 0, n2 = 0;
    for (const auto& r : records) {
      if (r.trial != t) continue;
      if (r.cls == "class1") {
        sw1 += r.x_sw;
        pf1 += r.x_pf;
        ++n1;
        ++class1_users;
        if (r.gain_x > 0.0) ++class1_gainers;
      } else {
        sw2 += r.x_sw;
        pf2 += r.x_pf;
        ++n2;
      }
    }
    sw1 /= n1;
    sw2 /= n2;
    pf1 /= n1;
    pf2 /= n2;
    if (sw2 > sw1) ++trials_sw_ordered;
    if (std::abs(pf2 - pf1) < std::abs(sw2 - sw1)) ++trials_gap_narrowed;
  }
  const double frac_sw = trials_sw_ordered / static_cast<double>(opts.trials);
  const double frac_gap = trials_gap_narrowed / static_cast<double>(opts.trials);
  const double frac_gain =
      class1_gainers / static_cast<double>(class1_users);
  if (frac_sw < 0.95 || frac_gap < 0.95 || frac_gain < 0.90) {
    out.pass = false;
  }
  out.detail = "SW class2>class1 in " + fmt(frac_sw) + " of trials; gap narrowed in " +
               fmt(frac_gap) + "; class-1 allocation gains " + fmt(frac_gain);
  return out;
}

// 8. Gradient of the fairness objective vs central finite differences on
//    1000 random positive profiles for alpha in {0, 0.5, 1, 2}.
Outcome criterion_gradient_checks() {
  Outcome out;
  RngStream rng = substream(80000, 0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng.below(6);
    SurplusProfile s(n);
    for (double& v : s) v = std::exp(rng.uniform(-3.0, 3.0));
    for (const auto& f : {FairnessParam::alpha(0), FairnessParam::alpha(0.5),
                          FairnessParam::alpha(1), FairnessParam::alpha(2)}) {
      const auto g = phi_gradient(s, f);
      for (std::size_t i = 0; i < n; ++i) {
        const double h = 1e-6 * std::max(1.0, s[i]);
        SurplusProfile up = s, dn = s;
        up[i] += h;
        dn[i] -= h;
        const double fd = (phi(up, f) - phi(dn, f)) / (2.0 * h);
        const double rel = std::abs(g[i] - fd) / std::max(1e-30, std::abs(fd));
        worst = std::max(worst, rel);
        if (rel > 1e-6) {
          out.pass = false;
          out.detail = "alpha=" + f.to_string() + " relative error " + fmt(rel);
          return out;
        }
      }
    }
  }
  out.detail = "1000 profiles x 4 alphas, worst relative error " + fmt(worst);
  return out;
}

// 9. Single-peak evidence: 200-point grid traces for 100 random
//    populations at alpha in {0, 1, max-min} show no violations.
Outcome criterion_unimodality_evidence() {
  Outcome out;
  for (int k = 0; k < 100; ++k) {
    Scenario sc = seeded_population(90000 + k, 3 + k % 8);
    for (const auto& f : {FairnessParam::alpha(0), FairnessParam::alpha(1),
                          FairnessParam::max_min()}) {
      OuterConfig cfg;
      cfg.refine = false;
      auto grid = grid_search(sc, f, cfg);
      if (!grid.unimodality) {
        out.pass = false;
        out.detail = "no trace at scenario " + std::to_string(k);
        return out;
      }
      if (!grid.unimodality->unimodal) {
        out.pass = false;
        out.detail = "violation at scenario " + std::to_string(k) + " alpha=" +
                     f.to_string();
        std::cerr << "unimodality violation, scenario for replay: "
                  << scenario_to_json(sc) << "\n";
        return out;
      }
    }
  }
  out.detail = "100 scenarios x 3 alphas, zero single-peak violations";
  return out;
}

// 10. Byte-identical reruns of every CSV-emitting experiment.
Outcome criterion_determinism() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / "fairalloc_acceptance";
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };

  // sweep
  const fs::path scenario = dir / "two_user.json";
  std::ofstream(scenario) << scenario_to_json(reference_two_user());
  std::string sweep_bytes;
  for (int round = 0; round < 2; ++round) {
    SweepOptions opts;
    opts.scenario_path = scenario.string();
    opts.out_path = (dir / "sweep.csv").string();
    std::ostringstream so, se;
    if (run_sweep(opts, so, se) != kExitOk) {
      out.pass = false;
      out.detail = "sweep failed: " + se.str();
      return out;
    }
    const std::string bytes = slurp(dir / "sweep.csv");
    if (round == 0) {
      sweep_bytes = bytes;
    } else if (bytes != sweep_bytes) {
      out.pass = false;
      out.detail = "sweep rerun differs";
      return out;
    }
  }

  // pofpoe (alternating thread counts must not matter)
  std::string pofpoe_csv, pofpoe_json;
  for (int round = 0; round < 2; ++round) {
    PofPoeOptions opts;
    opts.n_users_list = {3, 5};
    opts.trials = 4;
    opts.alphas = {FairnessParam::alpha(0), FairnessParam::alpha(1),
                   FairnessParam::max_min()};
    opts.seed = 123;
    opts.threads = round == 0 ? 4 : 1;
    opts.out_path = (dir / "pofpoe.csv").string();
    std::ostringstream so, se;
    if (run_pofpoe(opts, so, se) != kExitOk) {
      out.pass = false;
      out.detail = "pofpoe failed: " + se.str();
      return out;
    }
    const std::string csv = slurp(dir / "pofpoe.csv");
    const std::string js = slurp(dir / "pofpoe.csv.summary.json");
    if (round == 0) {
      pofpoe_csv = csv;
      pofpoe_json = js;
    } else if (csv != pofpoe_csv || js != pofpoe_json) {
      out.pass = false;
      out.detail = "pofpoe rerun differs";
      return out;
    }
  }

  // twoclass
  std::string twoclass_csv;
  for (int round = 0; round < 2; ++round) {
    TwoClassOptions opts;
    opts.trials = 4;
    opts.seed = 321;
    opts.threads = round == 0 ? 4 : 1;
    opts.out_path = (dir / "twoclass.csv").string();
    std::ostringstream so, se;
    if (run_twoclass(opts, so, se) != kExitOk) {
      out.pass = false;
      out.detail = "twoclass failed: " + se.str();
      return out;
    }
    const std::string csv = slurp(dir / "twoclass.csv");
    if (round == 0) {
      twoclass_csv = csv;
    } else if (csv != twoclass_csv) {
      out.pass = false;
      out.detail = "twoclass rerun differs";
      return out;
    }
  }
  out.detail = "sweep, pofpoe, twoclass reruns byte-identical";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--only") only = std::atoi(argv[2]);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence (2-user, 5 alphas)", criterion_oracle_equivalence},
      {"joint vs grid+refine cross-check", criterion_joint_cross_check},
      {"two-user sweep orderings", criterion_two_user_orderings},
      {"proportional-change inequality", criterion_pf_inequality},
      {"non-domination of swept optima", criterion_non_domination},
      {"PoF/PoE scaling with population size", criterion_pofpoe_scaling},
      {"two-class disparity reduction", criterion_two_class},
      {"fairness gradient finite-difference check", criterion_gradient_checks},
      {"single-peak grid traces", criterion_unimodality_evidence},
      {"byte-identical seeded reruns", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out = criteria[i].second();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n",
                out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", failures);
  }
  return failures;
}
