#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fairalloc/fairness.hpp"
#include "fairalloc/rng.hpp"

using namespace fairalloc;

namespace {

SurplusProfile random_positive_profile(RngStream& rng, std::size_t n) {
  SurplusProfile s(n);
  for (double& v : s) v = std::exp(rng.uniform(-3.0, 3.0));
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("fairness");

TEST_CASE("parameter parsing and the alpha=1 window") {
  CHECK(FairnessParam::parse("0").is_social_welfare());
  CHECK(FairnessParam::parse("inf").is_max_min());
  CHECK(FairnessParam::parse("maxmin").is_max_min());
  CHECK(FairnessParam::parse("0.5").value() == 0.5);
  CHECK(FairnessParam::alpha(1.0 + 5e-10).is_proportional_fair());
  CHECK(FairnessParam::alpha(1.0 - 5e-10).is_proportional_fair());
  CHECK_FALSE(FairnessParam::alpha(1.0 + 1e-6).is_proportional_fair());
  CHECK_THROWS_AS(FairnessParam::alpha(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(FairnessParam::parse("abc"), std::invalid_argument);
}

TEST_CASE("phi special cases") {
  CHECK(phi({1, 2, 3}, FairnessParam::alpha(0)) == 6.0);
  CHECK(phi({1, 1}, FairnessParam::alpha(1)) == 0.0);
  CHECK(phi({2}, FairnessParam::alpha(2)) == doctest::Approx(-0.5));
  CHECK(phi({3, 1, 2}, FairnessParam::max_min()) == 1.0);

  // boundary handling: zeros drive alpha >= 1 to the -inf sentinel
  CHECK(phi({1, 0}, FairnessParam::alpha(1)) == kNegInf);
  CHECK(phi({1, 0}, FairnessParam::alpha(2)) == kNegInf);
  CHECK(phi({1, 0}, FairnessParam::alpha(0.5)) == doctest::Approx(2.0));
  CHECK(phi({0, 0}, FairnessParam::max_min()) == 0.0);

  CHECK_THROWS_AS(phi({-0.1, 1.0}, FairnessParam::alpha(0)), std::domain_error);
}

TEST_CASE("phi_gradient") {
  auto g = phi_gradient({1, 1}, FairnessParam::alpha(1));
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 1.0);
  g = phi_gradient({4}, FairnessParam::alpha(0.5));
  CHECK(g[0] == doctest::Approx(0.5));
  g = phi_gradient({2, 5}, FairnessParam::alpha(0));
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 1.0);

  CHECK_THROWS_AS(phi_gradient({1, 1}, FairnessParam::max_min()),
                  std::invalid_argument);
  CHECK_THROWS_AS(phi_gradient({0.0, 1.0}, FairnessParam::alpha(1)),
                  std::domain_error);
}

TEST_CASE("price of fairness against the two-user reference values") {
  CHECK(price_of_fairness(3.656, 3.232) == doctest::Approx(0.1160).epsilon(1e-3));
  CHECK(price_of_fairness(3.656, 3.656) == 0.0);
  CHECK(price_of_fairness(3.656, 1.954) == doctest::Approx(0.4656).epsilon(1e-3));
  CHECK_THROWS_AS(price_of_fairness(0.0, 1.0), std::domain_error);
}

TEST_CASE("price of efficiency against the two-user reference values") {
  CHECK(price_of_efficiency(0.977, 0.668) == doctest::Approx(0.3163).epsilon(1e-3));
  CHECK(price_of_efficiency(0.977, 0.977) == 0.0);
  CHECK(price_of_efficiency(0.977, 0.281) == doctest::Approx(0.7124).epsilon(1e-3));
  CHECK_THROWS_AS(price_of_efficiency(-1.0, 0.5), std::domain_error);
}

TEST_CASE("phi is componentwise strictly increasing") {
  RngStream rng = substream(21, 0);
  const std::vector<FairnessParam> params = {
      FairnessParam::alpha(0), FairnessParam::alpha(0.5), FairnessParam::alpha(1),
      FairnessParam::alpha(2), FairnessParam::max_min()};
  for (int k = 0; k < 300; ++k) {
    SurplusProfile s = random_positive_profile(rng, 1 + k % 5);
    const std::size_t i = rng.below(s.size());
    SurplusProfile bigger = s;
    bigger[i] += rng.uniform(0.1, 1.0);
    for (const auto& f : params) {
      const double before = phi(s, f);
      const double after = phi(bigger, f);
      if (f.is_max_min()) {
        CHECK(after >= before);
        const bool unique_argmin =
            std::count_if(s.begin(), s.end(),
                          [&](double v) { return v <= s[i]; }) == 1;
        if (unique_argmin) CHECK(after > before);
      } else {
        CHECK(after > before);
      }
    }
  }
}

TEST_CASE("phi is concave at random midpoints") {
  RngStream rng = substream(22, 0);
  const std::vector<FairnessParam> params = {
      FairnessParam::alpha(0), FairnessParam::alpha(0.5), FairnessParam::alpha(1),
      FairnessParam::alpha(2), FairnessParam::max_min()};
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + k % 5;
    SurplusProfile a = random_positive_profile(rng, n);
    SurplusProfile b = random_positive_profile(rng, n);
    SurplusProfile mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (a[i] + b[i]);
    for (const auto& f : params) {
      const double lhs = phi(mid, f);
      const double rhs = 0.5 * phi(a, f) + 0.5 * phi(b, f);
      CHECK(lhs >= rhs - 1e-10 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("phi_gradient matches central finite differences") {
  RngStream rng = substream(23, 0);
  const std::vector<FairnessParam> params = {
      FairnessParam::alpha(0), FairnessParam::alpha(0.5), FairnessParam::alpha(1),
      FairnessParam::alpha(2)};
  for (int k = 0; k < 200; ++k) {
    SurplusProfile s = random_positive_profile(rng, 2 + k % 4);
    for (const auto& f : params) {
      const auto g = phi_gradient(s, f);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, s[i]);
        SurplusProfile up = s, dn = s;
        up[i] += h;
        dn[i] -= h;
        const double fd = (phi(up, f) - phi(dn, f)) / (2.0 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("argmax over a fixed set is stable through alpha = 1") {
  RngStream rng = substream(24, 0);
  std::vector<SurplusProfile> candidates;
  for (int k = 0; k < 12; ++k) candidates.push_back(random_positive_profile(rng, 3));
  auto argmax = [&](const FairnessParam& f) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (phi(candidates[i], f) > phi(candidates[best], f)) best = i;
    }
    return best;
  };
  const std::size_t at_one = argmax(FairnessParam::alpha(1.0));
  CHECK(argmax(FairnessParam::alpha(0.999)) == at_one);
  CHECK(argmax(FairnessParam::alpha(1.001)) == at_one);
}

TEST_SUITE_END();
