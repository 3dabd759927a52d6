#include <benchmark/benchmark.h>

#include "fairalloc/inner_solver.hpp"
#include "fairalloc/oracle.hpp"
#include "fairalloc/outer_search.hpp"
#include "fairalloc/scenario_gen.hpp"

namespace {

using namespace fairalloc;

Scenario population(int n) {
  RandomSpec spec;
  spec.family = ScenarioFamily::PofPoe;
  spec.seed = 42;
  spec.n_users = n;
  return gen_pofpoe_users(spec);
}

void BM_WaterFilling(benchmark::State& state) {
  const Scenario sc = population(static_cast<int>(state.range(0)));
  const double l = 0.3 * default_l_max(sc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_inner(sc, FairnessParam::alpha(0), l));
  }
}
BENCHMARK(BM_WaterFilling)->Arg(5)->Arg(20)->Arg(100);

void BM_InnerProportionalFair(benchmark::State& state) {
  const Scenario sc = population(static_cast<int>(state.range(0)));
  const double l = 0.3 * default_l_max(sc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_inner(sc, FairnessParam::alpha(1), l));
  }
}
BENCHMARK(BM_InnerProportionalFair)->Arg(5)->Arg(20)->Arg(100);

void BM_InnerMaxMin(benchmark::State& state) {
  const Scenario sc = population(static_cast<int>(state.range(0)));
  const double l = 0.3 * default_l_max(sc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_inner(sc, FairnessParam::max_min(), l));
  }
}
BENCHMARK(BM_InnerMaxMin)->Arg(5)->Arg(20)->Arg(100);

void BM_BoxSimplexProjection(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> v(n), ub(n, 1.0);
  for (int i = 0; i < n; ++i) v[i] = (i % 7) * 0.3 - 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_box_simplex(v, n * 0.4, ub));
  }
}
BENCHMARK(BM_BoxSimplexProjection)->Arg(10)->Arg(100)->Arg(1000);

void BM_GridSearchSweepPoint(benchmark::State& state) {
  const Scenario sc = population(20);
  const FairnessParam f =
      state.range(0) == 0 ? FairnessParam::alpha(0)
                          : (state.range(0) == 1 ? FairnessParam::alpha(1)
                                                 : FairnessParam::max_min());
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_outer(sc, f));
  }
}
BENCHMARK(BM_GridSearchSweepPoint)->Arg(0)->Arg(1)->Arg(2);

void BM_JointSolve(benchmark::State& state) {
  const Scenario sc = population(20);
  const FairnessParam f =
      state.range(0) == 0 ? FairnessParam::alpha(0)
                          : (state.range(0) == 1 ? FairnessParam::alpha(1)
                                                 : FairnessParam::max_min());
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_joint_quadratic(sc, f));
  }
}
BENCHMARK(BM_JointSolve)->Arg(0)->Arg(1)->Arg(2);

void BM_OracleJointTwoUser(benchmark::State& state) {
  const Scenario sc = population(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_joint(sc, FairnessParam::alpha(1)));
  }
}
BENCHMARK(BM_OracleJointTwoUser);

}  // namespace
