#include "cli/gallery.hpp"

#include <array>
#include <utility>

namespace ncspace::cli {

namespace {

// Three points with only constant functions: every point is identified with
// every other one and the groupoid is the full pair groupoid.
constexpr std::string_view kTotalType3pt = R"json({
  "dimension": 2,
  "constants_only": true,
  "points": [
    {"id": 0, "coords": [0.0, 0.0], "weight": 1.0},
    {"id": 1, "coords": [1.0, 0.5], "weight": 0.5},
    {"id": 2, "coords": [2.0, -1.0], "weight": 2.0}
  ]
})json";

// Unit square corners, generated by the first projection.
constexpr std::string_view kGrid2x2 = R"json({
  "dimension": 2,
  "points": [
    {"id": 0, "coords": [0.0, 0.0], "weight": 1.0},
    {"id": 1, "coords": [0.0, 1.0], "weight": 1.0},
    {"id": 2, "coords": [1.0, 0.0], "weight": 1.0},
    {"id": 3, "coords": [1.0, 1.0], "weight": 1.0}
  ],
  "generators": [{"name": "pi1", "expr": "x1"}]
})json";

// Five separated points: the relation is the identity.
constexpr std::string_view kHausdorffLine5pt = R"json({
  "dimension": 1,
  "points": [
    {"id": 0, "coords": [0.0], "weight": 0.25},
    {"id": 1, "coords": [0.25], "weight": 0.25},
    {"id": 2, "coords": [0.5], "weight": 0.125},
    {"id": 3, "coords": [0.75], "weight": 0.25},
    {"id": 4, "coords": [1.0], "weight": 0.125}
  ],
  "generators": [{"name": "x", "expr": "x1"}, {"name": "bump", "expr": "x1*(1 - x1)"}]
})json";

constexpr std::array<std::pair<std::string_view, std::string_view>, 3> kGallery{{
    {"total_type_3pt", kTotalType3pt},
    {"grid_2x2", kGrid2x2},
    {"hausdorff_line_5pt", kHausdorffLine5pt},
}};

}  // namespace

std::vector<std::string> gallery_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : kGallery) out.emplace_back(name);
  return out;
}

std::optional<std::string_view> gallery_config(std::string_view name) {
  for (const auto& [n, text] : kGallery)
    if (n == name) return text;
  return std::nullopt;
}

}  // namespace ncspace::cli
