#include "fairalloc/scenario_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fairalloc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("scenario: " + msg);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail("unknown field '" + item.key() + "' in " + where);
  }
}

double number_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail("missing field '" + std::string(key) + "' in " + where);
  const json& v = obj.at(key);
  if (!v.is_number()) fail("field '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  reject_unknown(doc, {"users", "cost", "convention"}, "scenario");

  if (!doc.contains("convention")) fail("missing field 'convention'");
  const json& conv = doc.at("convention");
  if (!conv.is_string()) fail("field 'convention' must be a string");
  const std::string convention = conv.get<std::string>();
  if (convention != "half" && convention != "plain") {
    fail("field 'convention' must be \"half\" or \"plain\"");
  }

  if (!doc.contains("users")) fail("missing field 'users'");
  const json& users = doc.at("users");
  if (!users.is_array() || users.empty()) {
    fail("field 'users' must be a non-empty array");
  }

  Scenario sc;
  bool any_label = false;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const std::string where = "users[" + std::to_string(i) + "]";
    const json& u = users.at(i);
    if (!u.is_object()) fail(where + " must be an object");
    reject_unknown(u, {"q", "b", "class"}, where);
    double q = number_field(u, "q", where);
    const double b = number_field(u, "b", where);
    if (convention == "plain") q *= 2.0;  // -a x^2 + b x  ->  q = 2a
    if (q < 0.0) fail("field '" + where + ".q' must be >= 0");
    if (!(b > 0.0)) fail("field '" + where + ".b' must be > 0");
    sc.users.emplace_back(q, b);
    std::string label;
    if (u.contains("class")) {
      if (!u.at("class").is_string()) fail("field '" + where + ".class' must be a string");
      label = u.at("class").get<std::string>();
      any_label = true;
    }
    labels.push_back(std::move(label));
  }
  if (any_label) sc.labels = std::move(labels);

  if (!doc.contains("cost")) fail("missing field 'cost'");
  const json& cost = doc.at("cost");
  if (!cost.is_object()) fail("field 'cost' must be an object");
  reject_unknown(cost, {"c2", "c1"}, "cost");
  const double c2 = number_field(cost, "c2", "cost");
  const double c1 = number_field(cost, "c1", "cost");
  if (c2 < 0.0) fail("field 'cost.c2' must be >= 0");
  if (c1 < 0.0) fail("field 'cost.c1' must be >= 0");
  sc.cost = CostModel::quadratic(c2, c1);

  sc.validate();
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json users = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sc.users.size(); ++i) {
    nlohmann::ordered_json u;
    u["q"] = sc.users[i].q;
    u["b"] = sc.users[i].b;
    if (!sc.labels.empty() && !sc.labels[i].empty()) u["class"] = sc.labels[i];
    users.push_back(std::move(u));
  }
  doc["users"] = std::move(users);
  doc["cost"] = {{"c2", sc.cost.c2}, {"c1", sc.cost.c1}};
  doc["convention"] = "half";
  return doc.dump();
}

}  // namespace fairalloc
