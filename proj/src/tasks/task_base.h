#pragma once

#include <string>
#include <utility>
#include <vector>

#include "logicforge/core/params.h"
#include "logicforge/core/task.h"

namespace logicforge::tasks {

class TaskBase : public Task {
 public:
  TaskBase(std::string name, std::vector<ParamSpec> specs)
      : name_(std::move(name)), schema_(std::move(specs)) {}

  std::string_view name() const override { return name_; }
  const ParamSchema& schema() const override { return schema_; }

 private:
  std::string name_;
  ParamSchema schema_;
};

inline ParamSpec int_param(std::string name, std::int64_t min, std::int64_t max,
                           std::int64_t easy, std::int64_t hard, std::string description,
                           bool harder_when_larger = true) {
  return ParamSpec{std::move(name), ParamKind::kInteger, min, max, easy, hard,
                   harder_when_larger, std::move(description)};
}

inline ParamSpec rational_param(std::string name, Rational min, Rational max, Rational easy,
                                Rational hard, std::string description,
                                bool harder_when_larger = true) {
  return ParamSpec{std::move(name), ParamKind::kRational, min, max, easy, hard,
                   harder_when_larger, std::move(description)};
}

}  // namespace logicforge::tasks
