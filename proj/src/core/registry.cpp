#include "logicforge/core/registry.h"

#include <algorithm>
#include <array>

#include "logicforge/core/errors.h"
#include "logicforge/core/hash.h"

namespace logicforge {
namespace {

constexpr std::array<std::string_view, 8> kEasyExcluded = {
    "arrow_maze", "goods_exchange", "kukurasu",           "minesweeper",
    "norinori",   "object_counting", "space_reasoning_tree", "wordscapes",
};

constexpr std::array<std::string_view, 16> kUnimplemented = {
    "arc_agi",        "arrow_maze",      "buggy_tables",     "calcudoko",
    "goods_exchange", "kukurasu",        "norinori",         "number_wall",
    "object_properties", "operation",    "space_reasoning",  "space_reasoning_tree",
    "survo",          "time_sequence",   "wordscapes",       "zebra_puzzle",
};

}  // namespace

std::span<const std::string_view> easy_excluded_tasks() { return kEasyExcluded; }

bool is_easy_excluded(std::string_view task) {
  return std::find(kEasyExcluded.begin(), kEasyExcluded.end(), task) != kEasyExcluded.end();
}

std::span<const std::string_view> unimplemented_catalog_tasks() { return kUnimplemented; }

bool is_valid_task_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

const TaskDescriptor& Registry::register_task(std::shared_ptr<const Task> task) {
  if (!task) throw RegistrationError("null task");
  std::string id(task->name());
  if (!is_valid_task_id(id)) throw RegistrationError("invalid task id '" + id + "'");
  if (find(id) != nullptr) throw RegistrationError("task '" + id + "' already registered");
  bool excluded = is_easy_excluded(id);
  descriptors_.push_back(TaskDescriptor{std::move(id), std::move(task), excluded});
  return descriptors_.back();
}

const TaskDescriptor* Registry::find(std::string_view id) const {
  auto it = std::find_if(descriptors_.begin(), descriptors_.end(),
                         [&](const TaskDescriptor& d) { return d.id == id; });
  return it == descriptors_.end() ? nullptr : &*it;
}

const TaskDescriptor& Registry::at(std::string_view id) const {
  const auto* descriptor = find(id);
  if (descriptor == nullptr) throw UnknownTaskError(std::string(id));
  return *descriptor;
}

std::vector<std::string> Registry::list() const {
  std::vector<std::string> out;
  out.reserve(descriptors_.size());
  for (const auto& d : descriptors_) out.push_back(d.id);
  return out;
}

Instance generate_instance(const Registry& registry, std::string_view task_id,
                           const DifficultyParams& params, std::uint64_t seed) {
  const Task& task = registry.task(task_id);
  DifficultyParams validated = task.schema().validate(params);
  task.check_params(validated);

  Rng rng(seed);
  Generated generated = task.generate(validated, rng);
  task.check_payload(generated.payload);
  if (!task.verify(generated.payload, generated.answer)) {
    throw Error("generator for '" + std::string(task_id) +
                "' produced a reference answer that does not verify");
  }

  Instance instance;
  instance.task = std::string(task_id);
  instance.params = std::move(validated);
  instance.seed = seed;
  instance.payload = std::move(generated.payload);
  instance.reference_answer = std::move(generated.answer);
  instance.prompt = task.render(instance.payload);
  instance.id = prompt_id(instance.prompt);
  return instance;
}

bool verify_answer(const Registry& registry, std::string_view task_id, const Json& payload,
                   const Json& candidate) {
  const Task& task = registry.task(task_id);
  task.check_payload(payload);
  return task.verify(payload, candidate);
}

Json instance_to_json(const Instance& instance) {
  Json j = Json::object();
  j["id"] = instance.id;
  j["task"] = instance.task;
  j["params"] = params_to_json(instance.params);
  j["seed"] = instance.seed;
  j["payload"] = instance.payload;
  j["reference_answer"] = instance.reference_answer;
  j["prompt"] = instance.prompt;
  return j;
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw StructuralError("instance must be a JSON object");
  for (const char* key : {"task", "payload"}) {
    if (!j.contains(key)) throw StructuralError(std::string("instance missing '") + key + "'");
  }
  Instance instance;
  try {
    instance.task = j.at("task").get<std::string>();
    instance.payload = j.at("payload");
    if (j.contains("params")) instance.params = params_from_json(j.at("params"));
    if (j.contains("seed")) instance.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("reference_answer")) instance.reference_answer = j.at("reference_answer");
    if (j.contains("prompt")) instance.prompt = j.at("prompt").get<std::string>();
    if (j.contains("id")) instance.id = j.at("id").get<std::string>();
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("malformed instance: ") + e.what());
  }
  return instance;
}

}  // namespace logicforge
