#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "logicforge/core/json.h"
#include "logicforge/core/params.h"
#include "logicforge/core/rng.h"

namespace logicforge {

// Version stamped into every payload as "schema_version".
inline constexpr int kPayloadSchemaVersion = 1;

struct Generated {
  Json payload;
  Json answer;
};

// A task plugin. Implementations are stateless; every member is safe to call
// concurrently.
//
// Payloads and canonical answers are JSON values whose shape each task
// documents (docs/payloads.md). Answers are task-structured (grid, cell set,
// mapping, string, integer, bool); the free-text form a model writes inside
// the answer tag is converted by parse_answer() and produced by
// format_answer().
class Task {
 public:
  virtual ~Task() = default;

  virtual std::string_view name() const = 0;
  virtual const ParamSchema& schema() const = 0;

  // Constraints that span several parameters. `params` has already passed
  // schema validation. Throws ParamError.
  virtual void check_params(const DifficultyParams& /*params*/) const {}

  virtual Generated generate(const DifficultyParams& params, Rng& rng) const = 0;

  // Throws StructuralError when the payload is not well formed.
  virtual void check_payload(const Json& payload) const = 0;

  // Whether `answer` satisfies every task rule against `payload`. Assumes
  // check_payload() passed; throws StructuralError on an answer of the wrong
  // shape (e.g. grid dimensions differ from the payload).
  virtual bool verify(const Json& payload, const Json& answer) const = 0;

  // Converts answer text into the canonical answer value, or nullopt when the
  // text does not follow the task's answer grammar. Never throws.
  virtual std::optional<Json> parse_answer(const Json& payload, std::string_view text) const = 0;

  virtual std::string format_answer(const Json& answer) const = 0;

  // Natural-language problem statement, including the expected answer format.
  virtual std::string render(const Json& payload) const = 0;
};

struct Instance {
  std::string task;
  DifficultyParams params;
  std::uint64_t seed = 0;
  Json payload;
  Json reference_answer;
  std::string prompt;
  std::string id;
};

Json instance_to_json(const Instance& instance);
// Throws StructuralError on missing fields.
Instance instance_from_json(const Json& j);

}  // namespace logicforge
