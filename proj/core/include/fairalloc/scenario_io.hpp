#pragma once

#include <string>
#include <string_view>

#include "fairalloc/model.hpp"

namespace fairalloc {

/// Parse a scenario from JSON text:
///   {"users":[{"q":2,"b":3,"class":"c1"}, ...],
///    "cost":{"c2":1,"c1":0},
///    "convention":"half" | "plain"}
/// "plain" coefficients are Theorem-2 style (U = -a x^2 + b x) and are
/// converted with q = 2a. Parsing is strict: unknown or missing fields
/// raise std::runtime_error naming the offending field.
Scenario parse_scenario(std::string_view json_text);

/// Load from a file path; errors name the path or the offending field.
Scenario load_scenario_file(const std::string& path);

/// Serialize in the half convention, suitable for parse_scenario.
std::string scenario_to_json(const Scenario& sc);

}  // namespace fairalloc
