#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fairalloc/fairness.hpp"
#include "fairalloc/model.hpp"

namespace fairalloc {

enum class SolveMethod { GridInner, Joint, Oracle };

const char* to_string(SolveMethod m);

/// Optimal point of the joint problem for one fairness parameter:
/// allocation x, total load l, the resulting surplus profile and
/// objective value, plus solver diagnostics.
struct AllocationResult {
  FairnessParam alpha = FairnessParam::alpha(0.0);
  std::vector<double> x;
  double l = 0.0;
  SurplusProfile s;
  double objective = 0.0;
  double kkt_residual = 0.0;
  long iterations = 0;
  SolveMethod method = SolveMethod::GridInner;

  double total_surplus() const {
    double t = 0.0;
    for (double v : s) t += v;
    return t;
  }
  double min_surplus() const {
    return *std::min_element(s.begin(), s.end());
  }
};

}  // namespace fairalloc
