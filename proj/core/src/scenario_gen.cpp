#include "fairalloc/scenario_gen.hpp"

#include <stdexcept>

#include "fairalloc/rng.hpp"

namespace fairalloc {

Scenario gen_pofpoe_users(const RandomSpec& spec) {
  if (spec.family != ScenarioFamily::PofPoe) {
    throw std::invalid_argument("gen_pofpoe_users: wrong family tag");
  }
  if (spec.n_users < 1) throw std::invalid_argument("n_users must be >= 1");
  Scenario sc;
  sc.users.reserve(static_cast<std::size_t>(spec.n_users));
  for (int i = 0; i < spec.n_users; ++i) {
    RngStream rng = substream(spec.seed, static_cast<std::uint64_t>(i));
    const double a = 1.0 + rng.uniform01();
    const double b = 1.0 + 10.0 * (a + 1.0) + 10.0 * rng.uniform01();
    sc.users.emplace_back(a, b);  // half convention: q = a
  }
  sc.cost = spec.cost_override.value_or(CostModel::quadratic(1.0, 0.0));
  sc.validate();
  return sc;
}

Scenario gen_two_class(const RandomSpec& spec) {
  if (spec.family != ScenarioFamily::TwoClass) {
    throw std::invalid_argument("gen_two_class: wrong family tag");
  }
  if (spec.class_sizes[0] < 1 || spec.class_sizes[1] < 1) {
    throw std::invalid_argument("class sizes must be >= 1");
  }
  if (!(spec.xbar > 0.0)) throw std::invalid_argument("xbar must be > 0");
  Scenario sc;
  const int total = spec.class_sizes[0] + spec.class_sizes[1];
  sc.users.reserve(static_cast<std::size_t>(total));
  sc.labels.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    RngStream rng = substream(spec.seed, static_cast<std::uint64_t>(i));
    const bool first_class = i < spec.class_sizes[0];
    const double a = first_class ? rng.uniform(1.0, 2.0) : rng.uniform(3.0, 4.0);
    sc.users.emplace_back(a, spec.xbar * a);  // b = xbar * a exactly
    sc.labels.emplace_back(first_class ? "class1" : "class2");
  }
  sc.cost = spec.cost_override.value_or(CostModel::quadratic(1.0, 0.0));
  sc.validate();
  return sc;
}

}  // namespace fairalloc
