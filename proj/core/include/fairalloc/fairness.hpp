#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fairalloc/model.hpp"

namespace fairalloc {

/// Explicit sentinel for the extended-real value of Phi at the boundary
/// (log of a zero surplus, negative powers of zero). Always assigned
/// directly, never produced by overflow.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Fairness objective selector: the alpha family, or the max-min limit.
/// Values within 1e-9 of 1 take the log branch exactly.
class FairnessParam {
 public:
  enum class Kind { Alpha, MaxMin };

  static FairnessParam alpha(double value);
  static FairnessParam max_min() { return FairnessParam(Kind::MaxMin, 0.0); }

  Kind kind() const { return kind_; }
  bool is_max_min() const { return kind_ == Kind::MaxMin; }
  /// Only meaningful for kind Alpha.
  double value() const { return value_; }

  bool is_social_welfare() const {
    return kind_ == Kind::Alpha && value_ == 0.0;
  }
  bool is_proportional_fair() const {
    return kind_ == Kind::Alpha && value_ == 1.0;
  }
  /// True for the log branch and beyond (alpha >= 1 or max-min), where
  /// zero surpluses send Phi to -inf.
  bool needs_positive_surplus() const {
    return kind_ == Kind::MaxMin ? false : value_ >= 1.0;
  }

  /// "0", "0.5", "inf", ... — the CLI spelling.
  std::string to_string() const;
  /// Parses the CLI spelling ("inf" or "maxmin" for the max-min kind).
  static FairnessParam parse(const std::string& text);

  friend bool operator==(const FairnessParam& a, const FairnessParam& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }

 private:
  FairnessParam(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

/// Alpha-fairness value of a surplus profile:
///   alpha = 0: sum s_i
///   alpha = 1: sum log s_i            (-inf if any s_i == 0)
///   else:      sum s_i^(1-a) / (1-a)  (-inf if a > 1 and any s_i == 0)
///   max-min:   min_i s_i
/// Any s_i < 0 is a domain error.
double phi(const SurplusProfile& s, const FairnessParam& f);

/// Gradient of phi: component i is s_i^(-alpha). Rejects the max-min kind
/// (nonsmooth) and zero surpluses when alpha >= 1.
std::vector<double> phi_gradient(const SurplusProfile& s,
                                 const FairnessParam& f);

/// PoF = (SYSTEM - FAIR) / SYSTEM, where FAIR is the achieved total
/// surplus of the alpha-fair solution and SYSTEM the alpha=0 total.
double price_of_fairness(double system_value, double fair_total);

/// PoE = (MaxMin - min_i z_i(alpha)) / MaxMin.
double price_of_efficiency(double maxmin_value, double min_surplus_at_alpha);

}  // namespace fairalloc
