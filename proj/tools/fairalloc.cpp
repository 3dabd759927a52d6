// fairalloc command-line driver: solve one scenario, sweep the fairness
// parameter, or run the seeded batch experiments.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fairalloc/experiments.hpp"
#include "fairalloc/version.hpp"

namespace {

struct SearchFlags {
  std::optional<double> delta_l;
  std::optional<double> l_max;
  bool no_refine = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--delta-l", delta_l, "grid step for the load search");
    cmd->add_option("--l-max", l_max, "upper bound of the load search");
    cmd->add_flag("--no-refine", no_refine,
                  "skip the golden-section refinement of the grid argmax");
  }
  fairalloc::OuterConfig outer() const {
    fairalloc::OuterConfig cfg;
    cfg.delta_l = delta_l;
    cfg.l_max = l_max;
    cfg.refine = !no_refine;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-fair joint allocation of aggregated energy"};
  app.set_version_flag("--version", fairalloc::kVersion);
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one scenario at one alpha");
  std::string solve_scenario, solve_alpha = "0";
  SearchFlags solve_flags;
  solve->add_option("--scenario", solve_scenario, "scenario JSON file")
      ->required();
  solve->add_option("--alpha", solve_alpha, "fairness parameter (number or 'inf')");
  solve_flags.attach(solve);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "trace the Pareto front over alphas");
  std::string sweep_scenario, sweep_alphas = "0,0.5,1,2,inf", sweep_out;
  SearchFlags sweep_flags;
  sweep->add_option("--scenario", sweep_scenario, "scenario JSON file")
      ->required();
  sweep->add_option("--alpha", sweep_alphas, "comma-separated alpha list");
  sweep->add_option("--out", sweep_out, "output CSV path (default: stdout)");
  sweep_flags.attach(sweep);

  // pofpoe
  auto* pofpoe = app.add_subcommand(
      "pofpoe", "PoF/PoE scaling experiment over random populations");
  std::vector<int> pp_n{5, 10, 20};
  int pp_trials = 100;
  std::string pp_alphas = "0,0.5,1,2,inf", pp_out;
  std::uint64_t pp_seed = 0;
  int pp_threads = 0;
  SearchFlags pp_flags;
  pofpoe->add_option("--n-users", pp_n, "population sizes")->delimiter(',');
  pofpoe->add_option("--trials", pp_trials, "trials per population size");
  pofpoe->add_option("--alpha", pp_alphas, "comma-separated alpha list");
  pofpoe->add_option("--seed", pp_seed, "base seed");
  pofpoe->add_option("--out", pp_out, "output CSV path")->required();
  pofpoe->add_option("--threads", pp_threads, "worker threads (0 = auto)");
  pp_flags.attach(pofpoe);

  // twoclass
  auto* twoclass = app.add_subcommand(
      "twoclass", "two-class SW vs PF disparity experiment");
  int tc_trials = 1000;
  std::uint64_t tc_seed = 0;
  std::string tc_out;
  double tc_xbar = 10.0;
  int tc_threads = 0;
  SearchFlags tc_flags;
  twoclass->add_option("--trials", tc_trials, "number of trials");
  twoclass->add_option("--seed", tc_seed, "base seed");
  twoclass->add_option("--xbar", tc_xbar, "common free-price consumption");
  twoclass->add_option("--out", tc_out, "output CSV path")->required();
  twoclass->add_option("--threads", tc_threads, "worker threads (0 = auto)");
  tc_flags.attach(twoclass);

  // oracle-check
  auto* oracle = app.add_subcommand(
      "oracle-check", "solver vs brute-force agreement on small scenarios");
  int oc_n = 50;
  std::uint64_t oc_seed = 0;
  std::string oc_alphas = "0,0.5,1,2,inf", oc_out;
  SearchFlags oc_flags;
  oracle->add_option("--n-scenarios", oc_n, "number of random scenarios");
  oracle->add_option("--seed", oc_seed, "base seed");
  oracle->add_option("--alpha", oc_alphas, "comma-separated alpha list");
  oracle->add_option("--out", oc_out, "optional CSV report path");
  oc_flags.attach(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : fairalloc::kExitInputError;
  }

  try {
    if (solve->parsed()) {
      fairalloc::SolveOptions opts;
      opts.scenario_path = solve_scenario;
      opts.alpha = fairalloc::FairnessParam::parse(solve_alpha);
      opts.outer = solve_flags.outer();
      return fairalloc::run_solve(opts, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
      fairalloc::SweepOptions opts;
      opts.scenario_path = sweep_scenario;
      opts.alphas = fairalloc::parse_alpha_list(sweep_alphas);
      opts.out_path = sweep_out;
      opts.outer = sweep_flags.outer();
      return fairalloc::run_sweep(opts, std::cout, std::cerr);
    }
    if (pofpoe->parsed()) {
      fairalloc::PofPoeOptions opts;
      opts.n_users_list = pp_n;
      opts.trials = pp_trials;
      opts.alphas = fairalloc::parse_alpha_list(pp_alphas);
      opts.seed = pp_seed;
      opts.out_path = pp_out;
      opts.threads = pp_threads;
      opts.outer = pp_flags.outer();
      return fairalloc::run_pofpoe(opts, std::cout, std::cerr);
    }
    if (twoclass->parsed()) {
      fairalloc::TwoClassOptions opts;
      opts.trials = tc_trials;
      opts.seed = tc_seed;
      opts.xbar = tc_xbar;
      opts.out_path = tc_out;
      opts.threads = tc_threads;
      opts.outer = tc_flags.outer();
      return fairalloc::run_twoclass(opts, std::cout, std::cerr);
    }
    if (oracle->parsed()) {
      fairalloc::OracleCheckOptions opts;
      opts.n_scenarios = oc_n;
      opts.seed = oc_seed;
      opts.alphas = fairalloc::parse_alpha_list(oc_alphas);
      opts.out_path = oc_out;
      opts.outer = oc_flags.outer();
      return fairalloc::run_oracle_check(opts, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairalloc::kExitInputError;
  }
  return fairalloc::kExitInputError;
}
