#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/core/errors.h"
#include "logicforge/core/json.h"

// String-in, string-out scoring against the built-in registry, for training
// loops and language bindings.
namespace logicforge::scoring {

// The "payload" member of an instance or dataset record; anything else is
// returned as is and taken to be a payload.
Json instance_payload(const Json& instance);

// `instance_json` is either a task payload or an instance record holding one
// under "payload". Returns the binary reward. Throws UnknownTaskError, or
// StructuralError when the JSON or payload is malformed; a malformed response
// scores 0.
int score_response(std::string_view task, std::string_view instance_json, std::string_view response);

struct BatchItem {
  std::string task;
  std::string instance_json;
  std::string response;
};

class BatchError : public Error {
 public:
  BatchError(std::size_t index, const std::string& what)
      : Error("batch item " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Elementwise score_response, in order. Throws std::invalid_argument on an
// empty batch and BatchError for the first item that raises.
std::vector<int> score_batch(std::span<const BatchItem> items);

// The trimmed answer text when the response follows the format.
std::optional<std::string> extract_answer(std::string_view response);

}  // namespace logicforge::scoring
