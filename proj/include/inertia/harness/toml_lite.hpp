#pragma once

#include <json.hpp>
#include <string_view>

namespace inertia::harness {

/// Parses the subset of TOML used by scenario files into a JSON object:
/// comments, [table] and [a.b] headers, bare/quoted/dotted keys, basic and
/// literal strings, integers, floats (incl. inf/nan, underscores), booleans,
/// multi-line arrays and inline tables. Arrays of tables, dates and
/// multi-line strings are not supported. Throws ConfigError with a line
/// number on malformed input.
nlohmann::json parse_toml(std::string_view text);

}  // namespace inertia::harness
