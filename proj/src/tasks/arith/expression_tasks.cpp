#include <algorithm>

#include "../task_base.h"
#include "logicforge/tasks/arith.h"
#include "logicforge/tasks/payload_util.h"

// Game of 24 and Mathador share the expression answer format.
namespace logicforge::arith {
namespace {

constexpr std::int64_t kMaxTarget = 1'000'000;

struct ExpressionSpec {
  std::vector<std::int64_t> numbers;
  std::int64_t target;
};

ExpressionSpec read_spec(const Json& payload, std::size_t min_numbers, std::size_t max_numbers) {
  const Json& arr = payload::require_array(payload, "numbers", min_numbers, max_numbers);
  ExpressionSpec spec{{}, payload::require_int(payload, "target", 0, kMaxTarget)};
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > kMaxTarget) {
      throw StructuralError("numbers must be integers in [0, " + std::to_string(kMaxTarget) + "]");
    }
    spec.numbers.push_back(v.get<std::int64_t>());
  }
  return spec;
}

Json make_payload(const std::vector<std::int64_t>& numbers, std::int64_t target) {
  Json p = payload::new_payload();
  p["numbers"] = numbers;
  p["target"] = target;
  return p;
}

std::string number_list(const std::vector<std::int64_t>& numbers) {
  std::vector<std::string> parts;
  for (auto n : numbers) parts.push_back(std::to_string(n));
  return payload::join(parts, ", ");
}

class ExpressionTask : public tasks::TaskBase {
 public:
  using TaskBase::TaskBase;

  // Accepts "<expr>" or "<expr> = <target>" and canonicalizes the spacing and
  // parentheses.
  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    text = payload::trim(text);
    auto eq = text.find('=');
    if (eq != std::string_view::npos) {
      if (!payload::parse_integer(payload::trim(text.substr(eq + 1)))) return std::nullopt;
      text = text.substr(0, eq);
    }
    auto expr = parse_expression(text);
    if (!expr) return std::nullopt;
    return Json(to_string(**expr));
  }

  std::string format_answer(const Json& answer) const override {
    if (!answer.is_string()) throw StructuralError("expression answer must be a string");
    return answer.get<std::string>();
  }

 protected:
  static ExprPtr answer_expr(const Json& answer) {
    if (!answer.is_string()) throw StructuralError("expression answer must be a string");
    auto expr = parse_expression(answer.get<std::string>());
    return expr ? *expr : nullptr;
  }
};

class Game24Task : public ExpressionTask {
 public:
  Game24Task()
      : ExpressionTask("game_of_24",
                       {tasks::int_param("m", 2, 6, 4, 5, "how many numbers to combine"),
                        tasks::int_param("target", 1, 1000, 24, 24, "value to reach", false),
                        tasks::int_param("max_value", 1, 100, 13, 20, "largest number drawn")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return game24_generate(params.get_small("m"), params.get_int("target"),
                           params.get_small("max_value"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_spec(payload, 1, kMaxSearchNumbers);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload, 1, kMaxSearchNumbers);
    ExprPtr expr = answer_expr(answer);
    if (!expr) return false;
    auto used = leaves(*expr);
    std::sort(used.begin(), used.end());
    std::sort(spec.numbers.begin(), spec.numbers.end());
    if (used != spec.numbers) return false;
    auto value = evaluate(*expr);
    return value && *value == Rational(spec.target);
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload, 1, kMaxSearchNumbers);
    return "Use the numbers " + number_list(spec.numbers) + " to make " +
           std::to_string(spec.target) +
           ". Each number must be used exactly once. You may use +, -, * and / and "
           "parentheses. Division is exact, so fractions are allowed along the way. Numbers "
           "cannot be joined into multi-digit numbers and there is no unary minus.\n\n"
           "Give the answer as a single expression, for example (1+2)*3.";
  }
};

class MathadorTask : public ExpressionTask {
 public:
  MathadorTask()
      : ExpressionTask("mathador",
                       {tasks::int_param("target_max", 10, 99, 50, 99, "largest target drawn")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return mathador_generate(params.get_small("target_max"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_spec(payload, 5, 5);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload, 5, 5);
    ExprPtr expr = answer_expr(answer);
    if (!expr || expr->is_leaf()) return false;
    std::string ops = operators(*expr);
    std::sort(ops.begin(), ops.end());
    if (std::adjacent_find(ops.begin(), ops.end()) != ops.end()) return false;
    auto used = leaves(*expr);
    std::sort(used.begin(), used.end());
    std::sort(spec.numbers.begin(), spec.numbers.end());
    if (!std::includes(spec.numbers.begin(), spec.numbers.end(), used.begin(), used.end())) {
      return false;
    }
    auto value = evaluate(*expr);
    return value && *value == Rational(spec.target);
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload, 5, 5);
    return "Mathador: reach the target " + std::to_string(spec.target) + " using the numbers " +
           number_list(spec.numbers) +
           ". Each number may be used at most once and you do not have to use all of them. "
           "Each of the operations +, -, * and / may be used at most once. Parentheses are "
           "allowed and division is exact. At least one operation is required.\n\n"
           "Give the answer as a single expression, for example (4+2)*3.";
  }
};

}  // namespace

Generated game24_generate(int m, std::int64_t target, int max_value, Rng& rng) {
  if (m < 2 || m > static_cast<int>(kMaxSearchNumbers)) {
    throw ParamError("game_of_24: m must be in [2, 6]");
  }
  if (max_value < 1) throw ParamError("game_of_24: max_value must be at least 1");
  if (target < 0 || target > kMaxTarget) throw ParamError("game_of_24: target out of range");
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::vector<std::int64_t> numbers;
    for (int i = 0; i < m; ++i) numbers.push_back(rng.range(1, max_value));
    auto witness = arith_expr_search(numbers, Rational(target));
    if (witness) return Generated{make_payload(numbers, target), Json(to_string(**witness))};
  }
  throw GenerationExhausted("game_of_24: no solvable multiset found", kMaxGenerationAttempts);
}

Generated mathador_generate(int target_max, Rng& rng) {
  if (target_max < 1 || target_max > kMaxTarget) {
    throw ParamError("mathador: target_max out of range");
  }
  SearchOptions options;
  options.use_all = false;
  options.each_op_once = true;
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::vector<std::int64_t> numbers;
    for (int sides : kMathadorDice) numbers.push_back(rng.range(1, sides));
    std::int64_t target = rng.range(1, target_max);
    // A target already on the table would be solved by a trivial x*1 or x+0.
    if (std::find(numbers.begin(), numbers.end(), target) != numbers.end()) continue;
    auto witness = arith_expr_search(numbers, Rational(target), options);
    if (witness) return Generated{make_payload(numbers, target), Json(to_string(**witness))};
  }
  throw GenerationExhausted("mathador: no solvable draw found", kMaxGenerationAttempts);
}

std::shared_ptr<const Task> make_game24_task() { return std::make_shared<Game24Task>(); }
std::shared_ptr<const Task> make_mathador_task() { return std::make_shared<MathadorTask>(); }

}  // namespace logicforge::arith
