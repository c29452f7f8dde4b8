#pragma once

#include <nlohmann/json.hpp>

namespace logicforge {

// Insertion-ordered so that serialized payloads and records keep the key order
// they were built with.
using Json = nlohmann::ordered_json;

}  // namespace logicforge
