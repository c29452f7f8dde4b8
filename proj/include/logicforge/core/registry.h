#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/core/json.h"
#include "logicforge/core/params.h"
#include "logicforge/core/task.h"

namespace logicforge {

struct TaskDescriptor {
  std::string id;
  std::shared_ptr<const Task> task;
  bool easy_excluded = false;

  const ParamSchema& schema() const { return task->schema(); }
};

// Tasks that stay at zero accuracy for small models even at lowered
// difficulty; the easy preset never emits them. Includes tasks that are not
// implemented here, so the list is matched against whatever is registered.
std::span<const std::string_view> easy_excluded_tasks();
bool is_easy_excluded(std::string_view task);

// Every task of the full catalog that has no generator in this library.
std::span<const std::string_view> unimplemented_catalog_tasks();

bool is_valid_task_id(std::string_view id);

// Built once at startup and read-only afterwards.
class Registry {
 public:
  // Throws RegistrationError on a duplicate or malformed id.
  const TaskDescriptor& register_task(std::shared_ptr<const Task> task);

  const TaskDescriptor* find(std::string_view id) const;
  // Throws UnknownTaskError.
  const TaskDescriptor& at(std::string_view id) const;
  const Task& task(std::string_view id) const { return *at(id).task; }

  // Registration order.
  std::vector<std::string> list() const;
  const std::vector<TaskDescriptor>& descriptors() const { return descriptors_; }
  std::size_t size() const { return descriptors_.size(); }

 private:
  std::vector<TaskDescriptor> descriptors_;
};

// Validates params, runs the generator, renders the prompt and checks the
// reference answer against the payload before returning. Throws
// UnknownTaskError, ParamError or GenerationExhausted.
Instance generate_instance(const Registry& registry, std::string_view task,
                           const DifficultyParams& params, std::uint64_t seed);

// Throws UnknownTaskError, or StructuralError on a malformed payload/answer.
bool verify_answer(const Registry& registry, std::string_view task, const Json& payload,
                   const Json& candidate);

}  // namespace logicforge
