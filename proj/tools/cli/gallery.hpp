#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ncspace::cli {

/// Names of the bundled example spaces, in listing order.
std::vector<std::string> gallery_names();

/// JSON config of a bundled example, or nullopt for an unknown name.
std::optional<std::string_view> gallery_config(std::string_view name);

}  // namespace ncspace::cli
