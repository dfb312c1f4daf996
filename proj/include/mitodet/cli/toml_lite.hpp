#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace mitodet::cli {

/// Flat `key = value` documents: strings, integers, floats, booleans,
/// arrays (may span lines) and inline tables. `#` starts a comment.
/// Section headers are not supported. Errors carry the line number.
nlohmann::ordered_json parse_toml_lite(std::string_view text);

// Inverse of the value grammar above; floats keep 17 significant digits.
std::string format_toml_value(const nlohmann::ordered_json& value);

}  // namespace mitodet::cli
