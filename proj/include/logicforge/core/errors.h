#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace logicforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RegistrationError : public Error {
 public:
  using Error::Error;
};

class UnknownTaskError : public Error {
 public:
  explicit UnknownTaskError(const std::string& task)
      : Error("unknown task: " + task) {}
};

// Difficulty parameters outside the task schema, or an infeasible combination.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Payload or answer value does not have the shape the task requires.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class GenerationExhausted : public Error {
 public:
  GenerationExhausted(const std::string& what, int attempts)
      : Error(what + " (after " + std::to_string(attempts) + " attempts)"),
        attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::uint64_t nodes)
      : Error("search node budget exceeded (" + std::to_string(nodes) + " nodes)"),
        nodes_(nodes) {}
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t nodes_;
};

// Upper bound on rejection-sampling attempts inside a single generate call.
inline constexpr int kMaxGenerationAttempts = 1000;

// Default node budget for exhaustive solution counting.
inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

}  // namespace logicforge
