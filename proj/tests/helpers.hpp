#pragma once

#include <string>
#include <vector>

#include "fairalloc/model.hpp"
#include "fairalloc/rng.hpp"
#include "fairalloc/scenario_gen.hpp"

namespace testutil {

// Two-user system with marginal utilities 3 - 2x and 6 - 2x and price
// p(l) = l; the workhorse example throughout the tests.
inline fairalloc::Scenario two_user_reference() {
  fairalloc::Scenario sc;
  sc.users = {fairalloc::QuadraticUtility(2.0, 3.0),
              fairalloc::QuadraticUtility(2.0, 6.0)};
  sc.cost = fairalloc::CostModel::quadratic(1.0, 0.0);
  return sc;
}

inline fairalloc::Scenario random_population(std::uint64_t seed, int n) {
  fairalloc::RandomSpec spec;
  spec.family = fairalloc::ScenarioFamily::PofPoe;
  spec.seed = seed;
  spec.n_users = n;
  return fairalloc::gen_pofpoe_users(spec);
}

}  // namespace testutil
