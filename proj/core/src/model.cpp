#include "fairalloc/model.hpp"

#include <cmath>
#include <stdexcept>

namespace fairalloc {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

QuadraticUtility::QuadraticUtility(double curvature, double slope)
    : q(curvature), b(slope) {
  require_finite(q, "utility q");
  require_finite(b, "utility b");
  if (q < 0.0) throw std::invalid_argument("utility q must be >= 0");
  if (b <= 0.0) throw std::invalid_argument("utility b must be > 0");
}

CostModel CostModel::quadratic(double c2, double c1) {
  require_finite(c2, "cost c2");
  require_finite(c1, "cost c1");
  if (c2 < 0.0) throw std::invalid_argument("cost c2 must be >= 0");
  if (c1 < 0.0) throw std::invalid_argument("cost c1 must be >= 0");
  return CostModel{CostVariant::Quadratic, c2, c1};
}

CostModel CostModel::affine_price(double c2, double c1) {
  CostModel m = quadratic(c2, c1);
  m.variant = CostVariant::AffinePrice;
  return m;
}

void Scenario::validate() const {
  if (users.empty()) throw std::invalid_argument("scenario needs N >= 1 users");
  if (!labels.empty() && labels.size() != users.size()) {
    throw std::invalid_argument("scenario labels must be empty or one per user");
  }
  for (const auto& u : users) {
    if (!(u.q >= 0.0) || !std::isfinite(u.q)) {
      throw std::invalid_argument("utility q must be >= 0");
    }
    if (!(u.b > 0.0) || !std::isfinite(u.b)) {
      throw std::invalid_argument("utility b must be > 0");
    }
  }
  if (cost.c2 < 0.0 || cost.c1 < 0.0) {
    throw std::invalid_argument("cost coefficients must be >= 0");
  }
}

double utility_value(const QuadraticUtility& u, double x) {
  if (x < 0.0) throw std::invalid_argument("utility_value: x must be >= 0");
  return (-0.5 * u.q * x + u.b) * x;
}

double marginal_utility(const QuadraticUtility& u, double x) {
  return u.b - u.q * x;
}

double price(const CostModel& c, double l) {
  if (l < 0.0) throw std::invalid_argument("price: l must be >= 0");
  return c.c2 * l + c.c1;
}

double surplus(const QuadraticUtility& u, double x, double p) {
  return utility_value(u, x) - p * x;
}

SurplusProfile surplus_profile(const Scenario& sc, const std::vector<double>& x,
                               double l) {
  if (x.size() != sc.n_users()) {
    throw std::invalid_argument("surplus_profile: allocation size != N");
  }
  const double p = price(sc.cost, l);
  SurplusProfile s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    s[i] = surplus(sc.users[i], x[i], p);
  }
  return s;
}

double total_payment(const CostModel& c, double l) {
  return l * price(c, l);
}

}  // namespace fairalloc
