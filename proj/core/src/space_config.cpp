// JSON space configuration reader.
//
// {
//   "dimension": 2,
//   "compare_mode": "exact" | {"kind": "quantized", "eps": 1e-9},
//   "constants_only": false,
//   "points": [{"id": 0, "coords": [0, 0], "weight": 1}, ...],
//   "generators": [{"name": "pi1", "expr": "x1"}, ...]
// }

#include <json.hpp>

#include "ncspace/diffspace.hpp"
#include "ncspace/error.hpp"

namespace ncspace {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("config field '" + field + "': " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  return *it;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

CompareMode parse_compare_mode(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "exact") return CompareMode::exact();
    field_error("compare_mode", "expected \"exact\" or {\"kind\": \"quantized\", \"eps\": ...}");
  }
  if (v.is_object()) {
    const json& kind = require(v, "kind", "compare_mode.");
    if (!kind.is_string()) field_error("compare_mode.kind", "expected a string");
    if (kind.get<std::string>() == "exact") return CompareMode::exact();
    if (kind.get<std::string>() != "quantized") field_error("compare_mode.kind", "unknown mode");
    double eps = as_number(require(v, "eps", "compare_mode."), "compare_mode.eps");
    if (!(eps > 0.0)) field_error("compare_mode.eps", "must be positive");
    return CompareMode::quantized(eps);
  }
  field_error("compare_mode", "expected a string or an object");
}

}  // namespace

SpaceSpec parse_space_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config root must be an object");

  SpaceSpec spec;
  const json& dim = require(doc, "dimension", "");
  if (!dim.is_number_integer() || dim.get<long long>() < 0) field_error("dimension", "expected a non-negative integer");
  spec.dimension = dim.get<std::size_t>();

  if (auto it = doc.find("compare_mode"); it != doc.end()) spec.compare_mode = parse_compare_mode(*it);
  if (auto it = doc.find("constants_only"); it != doc.end()) {
    if (!it->is_boolean()) field_error("constants_only", "expected a boolean");
    spec.constants_only = it->get<bool>();
  }

  const json& points = require(doc, "points", "");
  if (!points.is_array() || points.empty()) field_error("points", "expected a non-empty array");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string path = "points[" + std::to_string(i) + "].";
    const json& p = points[i];
    if (!p.is_object()) field_error(path.substr(0, path.size() - 1), "expected an object");
    Point pt;
    const json& id = require(p, "id", path);
    if (!id.is_number_integer()) field_error(path + "id", "expected an integer");
    pt.id = id.get<PointId>();
    const json& coords = require(p, "coords", path);
    if (!coords.is_array()) field_error(path + "coords", "expected an array");
    for (std::size_t c = 0; c < coords.size(); ++c)
      pt.coords.push_back(as_number(coords[c], path + "coords[" + std::to_string(c) + "]"));
    if (auto w = p.find("weight"); w != p.end()) pt.weight = as_number(*w, path + "weight");
    spec.points.push_back(std::move(pt));
  }

  if (auto it = doc.find("generators"); it != doc.end()) {
    if (!it->is_array()) field_error("generators", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "generators[" + std::to_string(i) + "].";
      const json& g = (*it)[i];
      if (!g.is_object()) field_error(path.substr(0, path.size() - 1), "expected an object");
      const json& expr = require(g, "expr", path);
      if (!expr.is_string()) field_error(path + "expr", "expected a string");
      std::string name = expr.get<std::string>();
      if (auto n = g.find("name"); n != g.end()) {
        if (!n->is_string()) field_error(path + "name", "expected a string");
        name = n->get<std::string>();
      }
      spec.generators.push_back({std::move(name), expr.get<std::string>()});
    }
  } else if (!spec.constants_only) {
    field_error("generators", "missing (set constants_only for the constants-only structure)");
  }
  return spec;
}

}  // namespace ncspace
