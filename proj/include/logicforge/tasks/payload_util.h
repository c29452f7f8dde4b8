#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/core/errors.h"
#include "logicforge/core/json.h"
#include "logicforge/core/task.h"

// Helpers shared by task plugins for payload validation and answer-text
// tokenizing. Validation failures throw StructuralError.
namespace logicforge::payload {

inline Json new_payload() {
  Json j = Json::object();
  j["schema_version"] = kPayloadSchemaVersion;
  return j;
}

void require_object(const Json& j, std::string_view what = "payload");
void require_schema_version(const Json& payload);
const Json& require_field(const Json& j, std::string_view key);
std::int64_t require_int(const Json& j, std::string_view key, std::int64_t lo, std::int64_t hi);
std::string require_string(const Json& j, std::string_view key);
bool require_bool(const Json& j, std::string_view key);
const Json& require_array(const Json& j, std::string_view key, std::size_t min_size = 0,
                          std::size_t max_size = SIZE_MAX);
std::vector<int> require_int_array(const Json& j, std::string_view key, std::size_t size,
                                   std::int64_t lo, std::int64_t hi);

std::string_view trim(std::string_view text);
std::string to_lower(std::string_view text);
std::string to_upper(std::string_view text);

// Splits on whitespace and commas, dropping empty pieces.
std::vector<std::string_view> split_tokens(std::string_view text);

// Strict non-negative or negative decimal integer; no sign other than '-'.
std::optional<std::int64_t> parse_integer(std::string_view text);

// Joins items with `sep`.
std::string join(const std::vector<std::string>& items, std::string_view sep);

}  // namespace logicforge::payload
