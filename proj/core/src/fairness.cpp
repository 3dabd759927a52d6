#include "fairalloc/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fairalloc {

namespace {

constexpr double kAlphaOneWindow = 1e-9;

void check_nonnegative(const SurplusProfile& s) {
  for (double v : s) {
    if (v < 0.0 || std::isnan(v)) {
      throw std::domain_error("phi: surplus profile must be nonnegative");
    }
  }
}

}  // namespace

FairnessParam FairnessParam::alpha(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
  if (std::abs(value - 1.0) <= kAlphaOneWindow) value = 1.0;
  return FairnessParam(Kind::Alpha, value);
}

std::string FairnessParam::to_string() const {
  if (is_max_min()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value_);
  return buf;
}

FairnessParam FairnessParam::parse(const std::string& text) {
  if (text == "inf" || text == "maxmin") return max_min();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse alpha value '" + text + "'");
  }
  if (pos != text.size()) {
    throw std::invalid_argument("cannot parse alpha value '" + text + "'");
  }
  return alpha(v);
}

double phi(const SurplusProfile& s, const FairnessParam& f) {
  if (s.empty()) throw std::invalid_argument("phi: empty surplus profile");
  check_nonnegative(s);
  if (f.is_max_min()) {
    return *std::min_element(s.begin(), s.end());
  }
  const double a = f.value();
  if (a == 0.0) {
    double total = 0.0;
    for (double v : s) total += v;
    return total;
  }
  if (a == 1.0) {
    double total = 0.0;
    for (double v : s) {
      if (v == 0.0) return kNegInf;
      total += std::log(v);
    }
    return total;
  }
  if (a > 1.0) {
    for (double v : s) {
      if (v == 0.0) return kNegInf;
    }
  }
  double total = 0.0;
  const double e = 1.0 - a;
  for (double v : s) total += std::pow(v, e) / e;
  return total;
}

std::vector<double> phi_gradient(const SurplusProfile& s,
                                 const FairnessParam& f) {
  if (f.is_max_min()) {
    throw std::invalid_argument("phi_gradient: max-min objective is nonsmooth");
  }
  check_nonnegative(s);
  const double a = f.value();
  std::vector<double> g(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (a >= 1.0 && s[i] == 0.0) {
      throw std::domain_error("phi_gradient: zero surplus with alpha >= 1");
    }
    g[i] = a == 0.0 ? 1.0 : std::pow(s[i], -a);
  }
  return g;
}

double price_of_fairness(double system_value, double fair_total) {
  if (!(system_value > 0.0)) {
    throw std::domain_error("price_of_fairness: SYSTEM value must be > 0");
  }
  return (system_value - fair_total) / system_value;
}

double price_of_efficiency(double maxmin_value, double min_surplus_at_alpha) {
  if (!(maxmin_value > 0.0)) {
    throw std::domain_error("price_of_efficiency: MaxMin value must be > 0");
  }
  return (maxmin_value - min_surplus_at_alpha) / maxmin_value;
}

}  // namespace fairalloc
