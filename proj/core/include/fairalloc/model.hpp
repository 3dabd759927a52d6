#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fairalloc {

/// Concave quadratic utility U(x) = -(1/2) q x^2 + b x, so U(0) = 0.
///
/// This is the canonical internal convention. Inputs given in the
/// "plain" convention U(x) = -a x^2 + b x are converted with q = 2a by
/// the scenario loader; keeping a single form avoids factor-of-2 bugs.
struct QuadraticUtility {
  double q = 0.0;  ///< curvature coefficient, >= 0 (surplus per energy^2)
  double b = 0.0;  ///< marginal utility at zero, > 0 (surplus per energy)

  QuadraticUtility() = default;
  QuadraticUtility(double curvature, double slope);
};

enum class CostVariant {
  Quadratic,   ///< C(l) = (1/2) c2 l^2 + c1 l is known
  AffinePrice  ///< only the price law p(l) = c2 l + c1 is given
};

/// Aggregator procurement cost. Both variants share the affine marginal
/// price p(l) = C'(l) = c2 l + c1; the variant records whether C itself
/// is known. C(0) = 0 and convexity hold by construction (c2, c1 >= 0).
struct CostModel {
  CostVariant variant = CostVariant::Quadratic;
  double c2 = 0.0;  ///< price slope (price per energy), >= 0
  double c1 = 0.0;  ///< price intercept (price), >= 0

  static CostModel quadratic(double c2, double c1);
  static CostModel affine_price(double c2, double c1);
};

/// A user population plus a cost model; the unit of solver input.
/// User order is stable and defines the index i throughout.
struct Scenario {
  std::vector<QuadraticUtility> users;
  CostModel cost;
  /// Optional per-user class tags; either empty or one entry per user.
  std::vector<std::string> labels;

  std::size_t n_users() const { return users.size(); }
  /// Throws std::invalid_argument when structurally invalid (N < 1,
  /// label count mismatch, bad coefficients).
  void validate() const;
};

/// Per-user surplus values, one entry per user.
using SurplusProfile = std::vector<double>;

// -- Eq.-level operations; all pure. Negative energy arguments are domain
//    errors (std::invalid_argument).

/// U(x) = -(1/2) q x^2 + b x, for x >= 0.
double utility_value(const QuadraticUtility& u, double x);

/// U'(x) = b - q x.
double marginal_utility(const QuadraticUtility& u, double x);

/// Marginal-cost price p(l) = c2 l + c1, for l >= 0.
double price(const CostModel& c, double l);

/// User surplus s = U(x) - p x, for x >= 0.
double surplus(const QuadraticUtility& u, double x, double p);

/// Surplus of every user at allocation x and total load l, using
/// p = price(cost, l). Does not require sum(x) == l; the brute-force
/// oracle evaluates it on arbitrary grid points.
SurplusProfile surplus_profile(const Scenario& sc, const std::vector<double>& x,
                               double l);

/// Total payment from users to the aggregator: l * p(l).
double total_payment(const CostModel& c, double l);

}  // namespace fairalloc
