#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairalloc/analysis.hpp"
#include "fairalloc/oracle.hpp"
#include "fairalloc/outer_search.hpp"

namespace fairalloc {

// Exit codes shared by every command: 0 success, 1 input error,
// 2 infeasible problem.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;

/// %.17g — enough digits to round-trip a double through text exactly.
std::string format_double(double v);

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation (n - 1)
  double p5 = 0.0;      ///< nearest-rank percentiles
  double p95 = 0.0;
  std::size_t count = 0;
};

SummaryStats compute_summary(std::vector<double> values);

/// Nearest-rank percentile of an already sorted sample: the value at
/// 1-based index ceil(p/100 * n).
double percentile_nearest_rank(const std::vector<double>& sorted, double p);

/// Comma-separated alpha list, e.g. "0,0.5,1,2,inf".
std::vector<FairnessParam> parse_alpha_list(const std::string& text);

// ---------------------------------------------------------------------

struct SolveOptions {
  std::string scenario_path;
  FairnessParam alpha = FairnessParam::alpha(0.0);
  OuterConfig outer;
  SolverConfig solver;
};

/// Prints the solved AllocationResult as JSON to `out`.
int run_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::string scenario_path;
  std::vector<FairnessParam> alphas;
  std::string out_path;  ///< empty: CSV goes to `out`
  OuterConfig outer;
  SolverConfig solver;
};

/// CSV columns: alpha,l,x_1..x_N,s_1..s_N,total_surplus,min_surplus,pof,poe.
int run_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

struct PofPoeOptions {
  std::vector<int> n_users_list{5, 10, 20};
  int trials = 100;
  std::vector<FairnessParam> alphas;  ///< empty: 0, 0.5, 1, 2, inf
  std::uint64_t seed = 0;
  std::string out_path;  ///< CSV; summary JSON lands at out_path + ".summary.json"
  int threads = 0;       ///< 0: hardware concurrency
  OuterConfig outer;
  SolverConfig solver;
};

struct PofPoeRecord {
  int n_users = 0;
  int trial = 0;
  FairnessParam alpha = FairnessParam::alpha(0.0);
  double pof = 0.0;
  double poe = 0.0;
};

/// Long-format CSV (n_users,trial,alpha,pof,poe) plus a summary JSON with
/// mean/std/p5/p95 per (N, alpha) and a provenance block.
int run_pofpoe(const PofPoeOptions& opts, std::ostream& out, std::ostream& err);

/// The records behind run_pofpoe, for in-process use; `failures` counts
/// (N, trial, alpha) cells whose search was infeasible.
std::vector<PofPoeRecord> collect_pofpoe_records(const PofPoeOptions& opts,
                                                 long& failures);

struct TwoClassOptions {
  int trials = 1000;
  std::uint64_t seed = 0;
  std::array<int, 2> class_sizes{10, 10};
  double xbar = 10.0;
  std::string out_path;
  int threads = 0;
  OuterConfig outer;
  SolverConfig solver;
};

struct TwoClassRecord {
  int trial = 0;
  int user = 0;
  std::string cls;
  double x_sw = 0.0, x_pf = 0.0;
  double s_sw = 0.0, s_pf = 0.0;
  double gain_x = 0.0, gain_s = 0.0;
};

/// Per-user CSV (trial,user,class,x_sw,x_pf,s_sw,s_pf,gain_x,gain_s) plus
/// class-level summary JSON.
int run_twoclass(const TwoClassOptions& opts, std::ostream& out,
                 std::ostream& err);

std::vector<TwoClassRecord> collect_twoclass_records(const TwoClassOptions& opts,
                                                     long& failures);

struct OracleCheckOptions {
  int n_scenarios = 50;
  std::uint64_t seed = 0;
  std::vector<FairnessParam> alphas;  ///< empty: 0, 0.5, 1, 2, inf
  std::string out_path;               ///< optional CSV report
  OracleConfig oracle;
  OuterConfig outer;
  SolverConfig solver;
};

/// Random N<=3 scenarios, solver vs brute-force oracle, two-sided
/// agreement within 1e-3 * (1 + |objective|). Failing scenarios are
/// dumped as JSON for replay. Nonzero exit on any failure.
int run_oracle_check(const OracleCheckOptions& opts, std::ostream& out,
                     std::ostream& err);

}  // namespace fairalloc
