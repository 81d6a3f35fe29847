#pragma once

#include <string>

#include "livekv/field_value.hpp"
#include "livekv/records.hpp"

namespace livekv {

std::string json_string(std::string_view text);
std::string value_json(const FieldValue& value);
std::string object_json(const Object& object);

/// One JSON object, no trailing newline. Numbers use format_number().
std::string to_json_line(const Record& record);

}  // namespace livekv
