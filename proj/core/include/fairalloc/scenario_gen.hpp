#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "fairalloc/model.hpp"

namespace fairalloc {

enum class ScenarioFamily { PofPoe, TwoClass };

/// Seeded specification of a random scenario. A fixed seed yields a
/// byte-identical scenario on every run and platform: each user draws
/// from its own substream (index = user position), so coefficients do
/// not depend on N or draw order elsewhere.
struct RandomSpec {
  std::uint64_t seed = 0;
  int n_users = 1;  ///< PofPoe family only
  ScenarioFamily family = ScenarioFamily::PofPoe;
  std::array<int, 2> class_sizes{10, 10};  ///< TwoClass family only
  double xbar = 10.0;  ///< common free-energy consumption (TwoClass)
  /// Both families default to p(l) = l (c2 = 1, c1 = 0).
  std::optional<CostModel> cost_override;
};

/// Heterogeneous population: a_i ~ 1 + Unif(0,1) (used directly as the
/// half-convention curvature) and b_i ~ 1 + 10 (a_i + 1) + 10 Unif(0,1).
Scenario gen_pofpoe_users(const RandomSpec& spec);

/// Two classes sharing the free-price consumption xbar = b_i / a_i:
/// class 1 draws a ~ Unif(1,2), class 2 draws a ~ Unif(3,4); users are
/// labeled "class1" / "class2".
Scenario gen_two_class(const RandomSpec& spec);

}  // namespace fairalloc
