#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/core/json.h"
#include "logicforge/core/rational.h"
#include "logicforge/core/rng.h"
#include "logicforge/core/task.h"

// Arithmetic puzzles: Game of 24, Cryptarithm, Mathador and Math Path.
// All evaluation is exact rational arithmetic.
namespace logicforge::arith {

// Binary expression tree over non-negative integer leaves and + - * /.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  char op = 0;  // 0 for a leaf
  std::int64_t value = 0;
  ExprPtr left;
  ExprPtr right;

  bool is_leaf() const { return op == 0; }
};

ExprPtr leaf(std::int64_t value);
ExprPtr combine(char op, ExprPtr left, ExprPtr right);

// nullopt on division by zero or 64-bit overflow.
std::optional<Rational> evaluate(const Expr& expr);

// Infix text with only the parentheses the precedence rules need, e.g.
// "8/(3-8/3)".
std::string to_string(const Expr& expr);

// Grammar: infix + - * / with parentheses over non-negative integer literals;
// no unary minus. Also accepts the symbols U+00D7, U+00F7 and U+2212 for
// times, divide and minus. Whitespace is ignored. nullopt on any syntax error.
std::optional<ExprPtr> parse_expression(std::string_view text);

// Leaves in left-to-right order.
std::vector<std::int64_t> leaves(const Expr& expr);
// Operators in left-to-right (in-order) position.
std::string operators(const Expr& expr);

struct SearchOptions {
  std::string ops = "+-*/";
  bool use_all = true;
  // Each operator symbol may appear at most once.
  bool each_op_once = false;
};

inline constexpr std::size_t kMaxSearchNumbers = 6;

// Exhaustive search over expression trees on `numbers` (every leaf order,
// tree shape and operator choice the options allow) for one evaluating to
// `target`. Without use_all, any non-empty sub-multiset may be used but at
// least one operator is required. Memoization is local to the call. Throws
// ParamError for more than kMaxSearchNumbers numbers.
std::optional<ExprPtr> arith_expr_search(const std::vector<std::int64_t>& numbers,
                                         Rational target, const SearchOptions& options = {});

// --- generators ----------------------------------------------------------

Generated game24_generate(int m, std::int64_t target, int max_value, Rng& rng);
Generated cryptarithm_generate(int num_addends, int word_len, Rng& rng);
Generated mathador_generate(int target_max, Rng& rng);
Generated math_path_generate(int rows, int cols, int blanks, Rng& rng);

// Number of letter-to-digit assignments (distinct digits, no leading zero on
// multi-letter words) under which the addends sum to `sum`, capped at limit.
std::uint64_t cryptarithm_count(const std::vector<std::string>& addends, const std::string& sum,
                                std::uint64_t limit = 2);

// Mathador dice: the five numbers come from a d4, d6, d8, d12 and d20.
inline constexpr int kMathadorDice[5] = {4, 6, 8, 12, 20};

// --- task plugins --------------------------------------------------------

std::shared_ptr<const Task> make_game24_task();
std::shared_ptr<const Task> make_cryptarithm_task();
std::shared_ptr<const Task> make_mathador_task();
std::shared_ptr<const Task> make_math_path_task();

}  // namespace logicforge::arith
