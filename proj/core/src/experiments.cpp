#include "fairalloc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "fairalloc/rng.hpp"
#include "fairalloc/scenario_gen.hpp"
#include "fairalloc/scenario_io.hpp"
#include "fairalloc/version.hpp"

namespace fairalloc {

namespace {

using nlohmann::ordered_json;

std::vector<FairnessParam> default_alphas() {
  return {FairnessParam::alpha(0.0), FairnessParam::alpha(0.5),
          FairnessParam::alpha(1.0), FairnessParam::alpha(2.0),
          FairnessParam::max_min()};
}

// JSON has no infinities; report them as strings.
ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered_json provenance_block(std::uint64_t seed, const OuterConfig& outer) {
  ordered_json p;
  p["seed"] = seed;
  p["version"] = kVersion;
  p["delta_l"] = outer.delta_l ? ordered_json(*outer.delta_l) : ordered_json(nullptr);
  p["l_max"] = outer.l_max ? ordered_json(*outer.l_max) : ordered_json(nullptr);
  p["refine"] = outer.refine;
  return p;
}

ordered_json stats_block(const SummaryStats& st) {
  ordered_json j;
  j["mean"] = json_number(st.mean);
  j["std"] = json_number(st.stddev);
  j["p5"] = json_number(st.p5);
  j["p95"] = json_number(st.p95);
  j["count"] = st.count;
  return j;
}

void parallel_for(std::size_t n, int threads_requested,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t threads = threads_requested > 0
                            ? static_cast<std::size_t>(threads_requested)
                            : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  return f;
}

int report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return kExitInputError;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double percentile_nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty sample");
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

SummaryStats compute_summary(std::vector<double> values) {
  SummaryStats st;
  st.count = values.size();
  if (values.empty()) return st;
  double total = 0.0;
  for (double v : values) total += v;
  st.mean = total / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - st.mean) * (v - st.mean);
  st.stddev = values.size() > 1
                  ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                  : 0.0;
  std::sort(values.begin(), values.end());
  st.p5 = percentile_nearest_rank(values, 5.0);
  st.p95 = percentile_nearest_rank(values, 95.0);
  return st;
}

std::vector<FairnessParam> parse_alpha_list(const std::string& text) {
  std::vector<FairnessParam> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    out.push_back(FairnessParam::parse(token));
  }
  if (out.empty()) throw std::invalid_argument("empty alpha list");
  return out;
}

// ---------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------

int run_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario_file(opts.scenario_path);
    GridSearchResult res = solve_outer(sc, opts.alpha, opts.outer, opts.solver);
    if (!res.best) {
      err << "infeasible: no load level admits a finite objective\n";
      return kExitInfeasible;
    }
    const AllocationResult& r = *res.best;
    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["alpha"] = r.alpha.to_string();
    doc["method"] = to_string(r.method);
    doc["l"] = json_number(r.l);
    doc["x"] = r.x;
    doc["s"] = r.s;
    doc["objective"] = json_number(r.objective);
    doc["total_surplus"] = json_number(r.total_surplus());
    doc["min_surplus"] = json_number(r.min_surplus());
    doc["kkt_residual"] = json_number(r.kkt_residual);
    doc["iterations"] = r.iterations;
    if (res.unimodality) {
      doc["trace_unimodal"] = res.unimodality->unimodal;
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

// ---------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------

namespace {

void write_sweep_csv(std::ostream& os, std::size_t n_users,
                     const std::vector<FairnessParam>& alphas,
                     const std::vector<std::optional<ParetoPoint>>& points) {
  os << "alpha,l";
  for (std::size_t i = 1; i <= n_users; ++i) os << ",x_" << i;
  for (std::size_t i = 1; i <= n_users; ++i) os << ",s_" << i;
  os << ",total_surplus,min_surplus,pof,poe\n";
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    os << alphas[k].to_string();
    if (points[k]) {
      const ParetoPoint& pt = *points[k];
      os << ',' << format_double(pt.l);
      for (double v : pt.x) os << ',' << format_double(v);
      for (double v : pt.s) os << ',' << format_double(v);
      os << ',' << format_double(pt.total_surplus) << ','
         << format_double(pt.min_surplus) << ',' << format_double(pt.pof)
         << ',' << format_double(pt.poe);
    } else {
      for (std::size_t c = 0; c < 2 * n_users + 5; ++c) os << ",nan";
    }
    os << '\n';
  }
}

}  // namespace

int run_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario_file(opts.scenario_path);
    const std::vector<FairnessParam> alphas =
        opts.alphas.empty() ? default_alphas() : opts.alphas;
    const auto points = sweep_alpha(sc, alphas, opts.outer, opts.solver);
    bool any = false;
    for (const auto& p : points) any = any || p.has_value();
    if (!any) {
      err << "infeasible: no load level admits a finite objective\n";
      return kExitInfeasible;
    }
    if (opts.out_path.empty()) {
      write_sweep_csv(out, sc.n_users(), alphas, points);
    } else {
      std::ofstream f = open_output(opts.out_path);
      write_sweep_csv(f, sc.n_users(), alphas, points);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

// ---------------------------------------------------------------------
// pofpoe
// ---------------------------------------------------------------------

std::vector<PofPoeRecord> collect_pofpoe_records(const PofPoeOptions& opts,
                                                 long& failures) {
  if (opts.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::vector<FairnessParam> alphas =
      opts.alphas.empty() ? default_alphas() : opts.alphas;

  struct Cell {
    std::vector<std::optional<ParetoPoint>> points;
  };
  const std::size_t n_cells =
      opts.n_users_list.size() * static_cast<std::size_t>(opts.trials);
  std::vector<Cell> cells(n_cells);

  parallel_for(n_cells, opts.threads, [&](std::size_t idx) {
    const std::size_t n_idx = idx / static_cast<std::size_t>(opts.trials);
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(opts.trials));
    RandomSpec spec;
    spec.family = ScenarioFamily::PofPoe;
    spec.n_users = opts.n_users_list[n_idx];
    spec.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(spec.n_users),
                            static_cast<std::uint64_t>(trial));
    const Scenario sc = gen_pofpoe_users(spec);
    cells[idx].points = sweep_alpha(sc, alphas, opts.outer, opts.solver);
  });

  std::vector<PofPoeRecord> records;
  records.reserve(n_cells * alphas.size());
  failures = 0;
  for (std::size_t n_idx = 0; n_idx < opts.n_users_list.size(); ++n_idx) {
    for (int trial = 0; trial < opts.trials; ++trial) {
      const Cell& cell =
          cells[n_idx * static_cast<std::size_t>(opts.trials) +
                static_cast<std::size_t>(trial)];
      for (std::size_t k = 0; k < alphas.size(); ++k) {
        if (!cell.points[k]) {
          ++failures;
          continue;
        }
        PofPoeRecord rec;
        rec.n_users = opts.n_users_list[n_idx];
        rec.trial = trial;
        rec.alpha = alphas[k];
        rec.pof = cell.points[k]->pof;
        rec.poe = cell.points[k]->poe;
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

int run_pofpoe(const PofPoeOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.out_path.empty()) {
      throw std::invalid_argument("pofpoe needs an output path (--out)");
    }
    long failures = 0;
    const std::vector<PofPoeRecord> records =
        collect_pofpoe_records(opts, failures);

    std::ofstream csv = open_output(opts.out_path);
    csv << "n_users,trial,alpha,pof,poe\n";
    for (const auto& r : records) {
      csv << r.n_users << ',' << r.trial << ',' << r.alpha.to_string() << ','
          << format_double(r.pof) << ',' << format_double(r.poe) << '\n';
    }
    csv.close();

    const std::vector<FairnessParam> alphas =
        opts.alphas.empty() ? default_alphas() : opts.alphas;
    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["experiment"] = "pofpoe";
    ordered_json prov = provenance_block(opts.seed, opts.outer);
    prov["trials"] = opts.trials;
    prov["n_users"] = opts.n_users_list;
    {
      std::vector<std::string> names;
      for (const auto& a : alphas) names.push_back(a.to_string());
      prov["alphas"] = names;
    }
    doc["provenance"] = std::move(prov);
    doc["failures"] = failures;
    ordered_json summary = ordered_json::array();
    for (int n : opts.n_users_list) {
      for (const auto& a : alphas) {
        std::vector<double> pofs, poes;
        for (const auto& r : records) {
          if (r.n_users == n && r.alpha == a) {
            if (std::isfinite(r.pof)) pofs.push_back(r.pof);
            if (std::isfinite(r.poe)) poes.push_back(r.poe);
          }
        }
        ordered_json row;
        row["n_users"] = n;
        row["alpha"] = a.to_string();
        row["pof"] = stats_block(compute_summary(std::move(pofs)));
        row["poe"] = stats_block(compute_summary(std::move(poes)));
        summary.push_back(std::move(row));
      }
    }
    doc["summary"] = std::move(summary);
    std::ofstream js = open_output(opts.out_path + ".summary.json");
    js << doc.dump(2) << "\n";

    out << "pofpoe: " << records.size() << " records, " << failures
        << " failures -> " << opts.out_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

// ---------------------------------------------------------------------
// twoclass
// ---------------------------------------------------------------------

std::vector<TwoClassRecord> collect_twoclass_records(const TwoClassOptions& opts,
                                                     long& failures) {
  if (opts.trials < 1) throw std::invalid_argument("trials must be >= 1");

  struct Trial {
    bool ok = false;
    Scenario sc;
    AllocationResult sw;
    AllocationResult pf;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(opts.trials));

  parallel_for(trials.size(), opts.threads, [&](std::size_t idx) {
    RandomSpec spec;
    spec.family = ScenarioFamily::TwoClass;
    spec.class_sizes = opts.class_sizes;
    spec.xbar = opts.xbar;
    spec.seed = derive_seed(opts.seed, 0, idx);
    Trial& t = trials[idx];
    t.sc = gen_two_class(spec);
    GridSearchResult sw =
        solve_outer(t.sc, FairnessParam::alpha(0.0), opts.outer, opts.solver);
    GridSearchResult pf =
        solve_outer(t.sc, FairnessParam::alpha(1.0), opts.outer, opts.solver);
    if (sw.best && pf.best) {
      t.ok = true;
      t.sw = std::move(*sw.best);
      t.pf = std::move(*pf.best);
    }
  });

  std::vector<TwoClassRecord> records;
  failures = 0;
  for (std::size_t idx = 0; idx < trials.size(); ++idx) {
    const Trial& t = trials[idx];
    if (!t.ok) {
      ++failures;
      continue;
    }
    for (std::size_t u = 0; u < t.sc.n_users(); ++u) {
      TwoClassRecord rec;
      rec.trial = static_cast<int>(idx);
      rec.user = static_cast<int>(u);
      rec.cls = t.sc.labels[u];
      rec.x_sw = t.sw.x[u];
      rec.x_pf = t.pf.x[u];
      rec.s_sw = t.sw.s[u];
      rec.s_pf = t.pf.s[u];
      rec.gain_x = rec.x_pf - rec.x_sw;
      rec.gain_s = rec.s_pf - rec.s_sw;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

int run_twoclass(const TwoClassOptions& opts, std::ostream& out,
                 std::ostream& err) {
  try {
    if (opts.out_path.empty()) {
      throw std::invalid_argument("twoclass needs an output path (--out)");
    }
    long failures = 0;
    const std::vector<TwoClassRecord> records =
        collect_twoclass_records(opts, failures);

    std::ofstream csv = open_output(opts.out_path);
    csv << "trial,user,class,x_sw,x_pf,s_sw,s_pf,gain_x,gain_s\n";
    for (const auto& r : records) {
      csv << r.trial << ',' << r.user << ',' << r.cls << ','
          << format_double(r.x_sw) << ',' << format_double(r.x_pf) << ','
          << format_double(r.s_sw) << ',' << format_double(r.s_pf) << ','
          << format_double(r.gain_x) << ',' << format_double(r.gain_s) << '\n';
    }
    csv.close();

    // Class-level aggregates.
    auto collect = [&](const std::string& cls, auto getter) {
      std::vector<double> vals;
      for (const auto& r : records) {
        if (r.cls == cls) vals.push_back(getter(r));
      }
      return vals;
    };
    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["experiment"] = "twoclass";
    ordered_json prov = provenance_block(opts.seed, opts.outer);
    prov["trials"] = opts.trials;
    prov["class_sizes"] = opts.class_sizes;
    prov["xbar"] = opts.xbar;
    doc["provenance"] = std::move(prov);
    doc["failures"] = failures;
    for (const std::string cls : {"class1", "class2"}) {
      ordered_json c;
      c["x_sw"] = stats_block(compute_summary(
          collect(cls, [](const TwoClassRecord& r) { return r.x_sw; })));
      c["x_pf"] = stats_block(compute_summary(
          collect(cls, [](const TwoClassRecord& r) { return r.x_pf; })));
      c["s_sw"] = stats_block(compute_summary(
          collect(cls, [](const TwoClassRecord& r) { return r.s_sw; })));
      c["s_pf"] = stats_block(compute_summary(
          collect(cls, [](const TwoClassRecord& r) { return r.s_pf; })));
      c["gain_x"] = stats_block(compute_summary(
          collect(cls, [](const TwoClassRecord& r) { return r.gain_x; })));
      c["gain_s"] = stats_block(compute_summary(
          collect(cls, [](const TwoClassRecord& r) { return r.gain_s; })));
      doc[cls] = std::move(c);
    }
    std::ofstream js = open_output(opts.out_path + ".summary.json");
    js << doc.dump(2) << "\n";

    out << "twoclass: " << records.size() << " records, " << failures
        << " failures -> " << opts.out_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

// ---------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------

int run_oracle_check(const OracleCheckOptions& opts, std::ostream& out,
                     std::ostream& err) {
  try {
    if (opts.n_scenarios < 1) {
      throw std::invalid_argument("n_scenarios must be >= 1");
    }
    const std::vector<FairnessParam> alphas =
        opts.alphas.empty() ? default_alphas() : opts.alphas;

    std::ostringstream csv;
    csv << "scenario,n_users,alpha,check,l,objective_solver,objective_oracle,"
           "status\n";
    long checks = 0, fails = 0;
    auto two_sided = [](double js, double jo) {
      if (js == kNegInf || jo == kNegInf) return js == jo;
      return js >= jo - 1e-3 * (1.0 + std::abs(jo)) &&
             jo >= js - 1e-3 * (1.0 + std::abs(js));
    };
    for (int k = 0; k < opts.n_scenarios; ++k) {
      RngStream stream = substream(opts.seed, static_cast<std::uint64_t>(k));
      RandomSpec spec;
      spec.family = ScenarioFamily::PofPoe;
      spec.n_users = 1 + static_cast<int>(stream.below(3));
      spec.seed = stream.next_u64();
      const Scenario sc = gen_pofpoe_users(spec);
      const double l_cap = default_l_max(sc);
      for (const auto& f : alphas) {
        // Fixed-load agreement: J(l) vs an exhaustive x grid.
        OracleConfig inner_cfg = opts.oracle;
        if (inner_cfg.grid_resolution == 0) inner_cfg.grid_resolution = 2000;
        for (double frac : {0.2, 0.4, 0.6}) {
          ++checks;
          const double l = frac * l_cap;
          InnerSolution sol = solve_inner(sc, f, l, opts.solver);
          InnerSolution ref = brute_force_inner(sc, f, l, inner_cfg);
          bool pass;
          if (sol.feasible != ref.feasible) {
            pass = false;
          } else if (!sol.feasible) {
            pass = true;
          } else {
            pass = two_sided(sol.value, ref.value);
          }
          if (!pass) {
            ++fails;
            err << "oracle-check failure (inner): alpha=" << f.to_string()
                << " l=" << format_double(l) << " solver=" << format_double(sol.value)
                << " oracle=" << format_double(ref.value)
                << " scenario=" << scenario_to_json(sc) << "\n";
          }
          csv << k << ',' << spec.n_users << ',' << f.to_string() << ",inner,"
              << format_double(l) << ',' << format_double(sol.value) << ','
              << format_double(ref.value) << ',' << (pass ? "pass" : "FAIL")
              << '\n';
        }
        // Joint agreement where the joint oracle grid is tight (N <= 2;
        // at N = 3 its kink error decays only linearly in the resolution).
        if (spec.n_users <= 2) {
          ++checks;
          GridSearchResult solver = solve_outer(sc, f, opts.outer, opts.solver);
          std::optional<AllocationResult> oracle =
              brute_force_joint(sc, f, opts.oracle);
          bool pass;
          double js = kNegInf, jo = kNegInf;
          if (solver.best) js = solver.best->objective;
          if (oracle) jo = oracle->objective;
          if (!solver.best || !oracle) {
            pass = !solver.best && !oracle;
          } else {
            pass = two_sided(js, jo);
          }
          if (!pass) {
            ++fails;
            err << "oracle-check failure (joint): alpha=" << f.to_string()
                << " solver=" << format_double(js)
                << " oracle=" << format_double(jo)
                << " scenario=" << scenario_to_json(sc) << "\n";
          }
          csv << k << ',' << spec.n_users << ',' << f.to_string() << ",joint,"
              << format_double(solver.best ? solver.best->l : kNegInf) << ','
              << format_double(js) << ',' << format_double(jo) << ','
              << (pass ? "pass" : "FAIL") << '\n';
        }
      }
    }
    if (!opts.out_path.empty()) {
      std::ofstream f = open_output(opts.out_path);
      f << csv.str();
    }
    out << "oracle-check: " << (checks - fails) << "/" << checks
        << " comparisons passed\n";
    return fails == 0 ? kExitOk : kExitInputError;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

}  // namespace fairalloc
