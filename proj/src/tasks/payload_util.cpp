#include "logicforge/tasks/payload_util.h"

#include <charconv>

namespace logicforge::payload {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) throw StructuralError(std::string(what) + " must be a JSON object");
}

void require_schema_version(const Json& payload) {
  require_object(payload);
  require_int(payload, "schema_version", kPayloadSchemaVersion, kPayloadSchemaVersion);
}

const Json& require_field(const Json& j, std::string_view key) {
  auto it = j.find(std::string(key));
  if (it == j.end()) throw StructuralError("missing field '" + std::string(key) + "'");
  return *it;
}

std::int64_t require_int(const Json& j, std::string_view key, std::int64_t lo, std::int64_t hi) {
  const Json& v = require_field(j, key);
  if (!v.is_number_integer()) {
    throw StructuralError("field '" + std::string(key) + "' must be an integer");
  }
  auto value = v.get<std::int64_t>();
  if (value < lo || value > hi) {
    throw StructuralError("field '" + std::string(key) + "' = " + std::to_string(value) +
                          " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return value;
}

std::string require_string(const Json& j, std::string_view key) {
  const Json& v = require_field(j, key);
  if (!v.is_string()) throw StructuralError("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

bool require_bool(const Json& j, std::string_view key) {
  const Json& v = require_field(j, key);
  if (!v.is_boolean()) throw StructuralError("field '" + std::string(key) + "' must be a bool");
  return v.get<bool>();
}

const Json& require_array(const Json& j, std::string_view key, std::size_t min_size,
                          std::size_t max_size) {
  const Json& v = require_field(j, key);
  if (!v.is_array()) throw StructuralError("field '" + std::string(key) + "' must be an array");
  if (v.size() < min_size || v.size() > max_size) {
    throw StructuralError("field '" + std::string(key) + "' has unexpected length " +
                          std::to_string(v.size()));
  }
  return v;
}

std::vector<int> require_int_array(const Json& j, std::string_view key, std::size_t size,
                                   std::int64_t lo, std::int64_t hi) {
  const Json& arr = require_array(j, key, size, size);
  std::vector<int> out;
  out.reserve(size);
  for (const auto& v : arr) {
    if (!v.is_number_integer()) {
      throw StructuralError("field '" + std::string(key) + "' must hold integers");
    }
    auto value = v.get<std::int64_t>();
    if (value < lo || value > hi) {
      throw StructuralError("field '" + std::string(key) + "' holds out-of-range value " +
                            std::to_string(value));
    }
    out.push_back(static_cast<int>(value));
  }
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string to_upper(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (is_space(text[i]) || text[i] == ',')) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i]) && text[i] != ',') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::optional<std::int64_t> parse_integer(std::string_view text) {
  if (text.empty() || text.size() > 18) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(items[i]);
  }
  return out;
}

}  // namespace logicforge::payload
