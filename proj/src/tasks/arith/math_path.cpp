#include <algorithm>
#include <numeric>

#include "../task_base.h"
#include "logicforge/tasks/arith.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::arith {
namespace {

constexpr int kMaxSide = 6;
constexpr int kOpRetries = 200;

// Operands with the operators between them. Multiplication and division bind
// tighter than addition and subtraction; equal precedence goes left to right.
std::optional<Rational> evaluate_chain(const std::vector<std::int64_t>& operands,
                                       const std::string& ops) {
  std::vector<Rational> terms{Rational(operands[0])};
  std::string additive;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    Rational next(operands[i + 1]);
    if (ops[i] == '*' || ops[i] == '/') {
      auto v = ops[i] == '*' ? checked_mul(terms.back(), next) : checked_div(terms.back(), next);
      if (!v) return std::nullopt;
      terms.back() = *v;
    } else {
      additive += ops[i];
      terms.push_back(next);
    }
  }
  Rational total = terms[0];
  for (std::size_t i = 0; i < additive.size(); ++i) {
    auto v = additive[i] == '+' ? checked_add(total, terms[i + 1]) : checked_sub(total, terms[i + 1]);
    if (!v) return std::nullopt;
    total = *v;
  }
  return total;
}

struct PathSpec {
  int rows;
  int cols;
  std::vector<int> cells;  // 0 = blank
  std::vector<std::string> row_ops;
  std::vector<std::string> col_ops;
  std::vector<std::int64_t> row_results;
  std::vector<std::int64_t> col_results;

  int blanks() const { return static_cast<int>(std::count(cells.begin(), cells.end(), 0)); }
  int at(int r, int c) const { return cells[static_cast<std::size_t>(r * cols + c)]; }
};

std::vector<std::string> read_ops(const Json& payload, std::string_view key, std::size_t count,
                                  std::size_t length) {
  std::vector<std::string> out;
  for (const auto& v : payload::require_array(payload, key, count, count)) {
    if (!v.is_string() || v.get<std::string>().size() != length) {
      throw StructuralError("math_path: '" + std::string(key) + "' entries must be strings of " +
                            std::to_string(length) + " operators");
    }
    auto s = v.get<std::string>();
    if (s.find_first_not_of("+-*/") != std::string::npos) {
      throw StructuralError("math_path: unknown operator");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::int64_t> read_results(const Json& payload, std::string_view key,
                                       std::size_t count) {
  std::vector<std::int64_t> out;
  for (const auto& v : payload::require_array(payload, key, count, count)) {
    if (!v.is_number_integer()) throw StructuralError("math_path: results must be integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

PathSpec read_spec(const Json& payload) {
  PathSpec s;
  s.rows = static_cast<int>(payload::require_int(payload, "rows", 1, kMaxSide));
  s.cols = static_cast<int>(payload::require_int(payload, "cols", 2, kMaxSide));
  s.cells = payload::require_int_array(payload, "cells", static_cast<std::size_t>(s.rows * s.cols),
                                       0, 9);
  auto rows = static_cast<std::size_t>(s.rows);
  auto cols = static_cast<std::size_t>(s.cols);
  bool has_columns = s.rows > 1;
  s.row_ops = read_ops(payload, "row_ops", rows, cols - 1);
  s.col_ops = read_ops(payload, "col_ops", has_columns ? cols : 0, rows - 1);
  s.row_results = read_results(payload, "row_results", rows);
  s.col_results = read_results(payload, "col_results", has_columns ? cols : 0);
  return s;
}

// Checks every equation of `spec` with the blanks filled from `fill`.
bool equations_hold(const PathSpec& spec, const std::vector<int>& fill) {
  std::vector<std::int64_t> grid(spec.cells.begin(), spec.cells.end());
  std::size_t next = 0;
  for (auto& v : grid) {
    if (v == 0) v = fill[next++];
  }
  for (int r = 0; r < spec.rows; ++r) {
    std::vector<std::int64_t> line(grid.begin() + r * spec.cols, grid.begin() + (r + 1) * spec.cols);
    auto v = evaluate_chain(line, spec.row_ops[static_cast<std::size_t>(r)]);
    if (!v || *v != Rational(spec.row_results[static_cast<std::size_t>(r)])) return false;
  }
  for (std::size_t c = 0; c < spec.col_ops.size(); ++c) {
    std::vector<std::int64_t> line;
    for (int r = 0; r < spec.rows; ++r) line.push_back(grid[static_cast<std::size_t>(r * spec.cols) + c]);
    auto v = evaluate_chain(line, spec.col_ops[c]);
    if (!v || *v != Rational(spec.col_results[c])) return false;
  }
  return true;
}

std::string equation_text(const std::vector<int>& operands, const std::string& ops,
                          std::int64_t result) {
  std::string out;
  for (std::size_t i = 0; i < operands.size(); ++i) {
    if (i > 0) {
      out += ' ';
      out += ops[i - 1];
      out += ' ';
    }
    out += operands[i] == 0 ? "_" : std::to_string(operands[i]);
  }
  return out + " = " + std::to_string(result);
}

class MathPathTask : public tasks::TaskBase {
 public:
  MathPathTask()
      : TaskBase("math_path", {tasks::int_param("rows", 1, 4, 2, 3, "equation rows"),
                               tasks::int_param("cols", 2, 4, 3, 4, "operands per row"),
                               tasks::int_param("blanks", 1, 16, 2, 5, "digits to fill in")}) {}

  void check_params(const DifficultyParams& params) const override {
    if (params.get_small("blanks") > params.get_small("rows") * params.get_small("cols")) {
      throw ParamError("math_path: blanks must be at most rows*cols");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return math_path_generate(params.get_small("rows"), params.get_small("cols"),
                              params.get_small("blanks"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    if (read_spec(payload).blanks() == 0) throw StructuralError("math_path: no blanks");
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload);
    if (!answer.is_array() || answer.size() != static_cast<std::size_t>(spec.blanks())) {
      throw StructuralError("math_path: answer must list one digit per blank");
    }
    std::vector<int> fill;
    for (const auto& v : answer) {
      if (!v.is_number_integer()) throw StructuralError("math_path: answer entries must be integers");
      auto d = v.get<std::int64_t>();
      if (d < 1 || d > 9) return false;
      fill.push_back(static_cast<int>(d));
    }
    return equations_hold(spec, fill);
  }

  std::optional<Json> parse_answer(const Json& payload, std::string_view text) const override {
    std::size_t expected;
    try {
      expected = static_cast<std::size_t>(read_spec(payload).blanks());
    } catch (const StructuralError&) {
      return std::nullopt;
    }
    auto tokens = payload::split_tokens(text);
    if (tokens.size() != expected) return std::nullopt;
    Json out = Json::array();
    for (auto t : tokens) {
      auto v = payload::parse_integer(t);
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  }

  std::string format_answer(const Json& answer) const override {
    if (!answer.is_array()) throw StructuralError("math_path: answer must be an array");
    std::vector<std::string> parts;
    for (const auto& v : answer) parts.push_back(v.dump());
    return payload::join(parts, " ");
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    std::string out =
        "Fill each blank (_) with a digit from 1 to 9 so that every equation below holds. The "
        "digits sit in a grid of " +
        std::to_string(spec.rows) + " row" + (spec.rows > 1 ? "s" : "") + " and " +
        std::to_string(spec.cols) +
        " columns; each row is read left to right" +
        (spec.rows > 1 ? " and each column top to bottom" : "") +
        ". Standard operator precedence applies: * and / are evaluated before + and -, and "
        "operators of equal precedence are evaluated left to right. Division is exact.\n\n";
    for (int r = 0; r < spec.rows; ++r) {
      std::vector<int> line(spec.cells.begin() + r * spec.cols,
                            spec.cells.begin() + (r + 1) * spec.cols);
      out += "Row " + std::to_string(r + 1) + ": " +
             equation_text(line, spec.row_ops[static_cast<std::size_t>(r)],
                           spec.row_results[static_cast<std::size_t>(r)]) +
             "\n";
    }
    for (std::size_t c = 0; c < spec.col_ops.size(); ++c) {
      std::vector<int> line;
      for (int r = 0; r < spec.rows; ++r) line.push_back(spec.at(r, static_cast<int>(c)));
      out += "Column " + std::to_string(c + 1) + ": " +
             equation_text(line, spec.col_ops[c], spec.col_results[c]) + "\n";
    }
    out += spec.blanks() == 1
               ? "\nGive the digit for the blank."
               : "\nGive the digits for the " + std::to_string(spec.blanks()) +
                     " blanks in reading order (row by row, left to right), separated by spaces.";
    return out;
  }
};

// Operators for one equation over `operands` with an integer result. Falls
// back to + and - only when random draws keep producing fractions.
std::pair<std::string, std::int64_t> draw_equation(const std::vector<std::int64_t>& operands,
                                                   Rng& rng) {
  static constexpr char kOps[] = {'+', '-', '*', '/'};
  for (int attempt = 0; attempt <= kOpRetries; ++attempt) {
    std::string ops;
    int choices = attempt < kOpRetries ? 4 : 2;
    for (std::size_t i = 1; i < operands.size(); ++i) {
      ops += kOps[rng.below(static_cast<std::uint64_t>(choices))];
    }
    auto v = evaluate_chain(operands, ops);
    if (v && v->is_integer()) return {ops, v->num()};
  }
  throw GenerationExhausted("math_path: no integral equation", kOpRetries);
}

}  // namespace

Generated math_path_generate(int rows, int cols, int blanks, Rng& rng) {
  if (rows < 1 || rows > kMaxSide || cols < 2 || cols > kMaxSide) {
    throw ParamError("math_path: rows must be in [1, 6] and cols in [2, 6]");
  }
  if (blanks < 1 || blanks > rows * cols) throw ParamError("math_path: blanks must be in [1, rows*cols]");

  std::vector<std::int64_t> digits;
  for (int i = 0; i < rows * cols; ++i) digits.push_back(rng.range(1, 9));
  Json row_ops = Json::array(), col_ops = Json::array();
  Json row_results = Json::array(), col_results = Json::array();
  for (int r = 0; r < rows; ++r) {
    std::vector<std::int64_t> line(digits.begin() + r * cols, digits.begin() + (r + 1) * cols);
    auto [ops, result] = draw_equation(line, rng);
    row_ops.push_back(ops);
    row_results.push_back(result);
  }
  if (rows > 1) {
    for (int c = 0; c < cols; ++c) {
      std::vector<std::int64_t> line;
      for (int r = 0; r < rows; ++r) line.push_back(digits[static_cast<std::size_t>(r * cols + c)]);
      auto [ops, result] = draw_equation(line, rng);
      col_ops.push_back(ops);
      col_results.push_back(result);
    }
  }

  std::vector<int> order(static_cast<std::size_t>(rows * cols));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  order.resize(static_cast<std::size_t>(blanks));
  std::sort(order.begin(), order.end());
  std::vector<int> cells(digits.begin(), digits.end());
  Json answer = Json::array();
  for (int idx : order) {
    answer.push_back(cells[static_cast<std::size_t>(idx)]);
    cells[static_cast<std::size_t>(idx)] = 0;
  }

  Json p = payload::new_payload();
  p["rows"] = rows;
  p["cols"] = cols;
  p["cells"] = cells;
  p["row_ops"] = std::move(row_ops);
  p["col_ops"] = std::move(col_ops);
  p["row_results"] = std::move(row_results);
  p["col_results"] = std::move(col_results);
  return Generated{std::move(p), std::move(answer)};
}

std::shared_ptr<const Task> make_math_path_task() { return std::make_shared<MathPathTask>(); }

}  // namespace logicforge::arith
