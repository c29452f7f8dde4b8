#include "logicforge/protocol/scoring.h"

#include <stdexcept>

#include "logicforge/core/json.h"
#include "logicforge/protocol/protocol.h"
#include "logicforge/tasks/builtin.h"

namespace logicforge::scoring {

int score_response(std::string_view task, std::string_view instance_json, std::string_view response) {
  const Registry& registry = builtin_registry();
  const Task& plugin = registry.task(task);
  Json parsed = Json::parse(instance_json, nullptr, false);
  if (parsed.is_discarded()) throw StructuralError("instance is not valid JSON");
  Json j = instance_payload(parsed);
  plugin.check_payload(j);
  return protocol::compute_reward(registry, task, j, response).reward;
}

Json instance_payload(const Json& instance) {
  if (instance.is_object() && instance.contains("payload") && instance.at("payload").is_object()) {
    return instance.at("payload");
  }
  return instance;
}

std::vector<int> score_batch(std::span<const BatchItem> items) {
  if (items.empty()) throw std::invalid_argument("score_batch needs at least one item");
  std::vector<int> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      out.push_back(score_response(items[i].task, items[i].instance_json, items[i].response));
    } catch (const Error& e) {
      throw BatchError(i, e.what());
    }
  }
  return out;
}

std::optional<std::string> extract_answer(std::string_view response) {
  return protocol::check_format(response).answer_text;
}

}  // namespace logicforge::scoring
