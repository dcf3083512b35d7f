#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace conley::cli {

enum class Format { Json, Text };

/// Sorted keys, two-space indent, floats as %.17g, non-finite floats as null.
std::string to_json_text(const nlohmann::json& value);

/// Nested key/value listing; arrays of flat objects become tables.
std::string to_plain_text(const nlohmann::json& value);

/// Writes the report to `out` in the requested format. Throws IoError.
void emit(const nlohmann::json& report, Format format, std::ostream& out);

}  // namespace conley::cli
