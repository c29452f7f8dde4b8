#include "../task_base.h"
#include "logicforge/tasks/formal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::formal {
namespace {

constexpr int kMaxDepth = 8;
constexpr int kMaxParseNesting = 200;

BoolExprPtr make_literal(bool value) {
  auto e = std::make_shared<BoolExpr>();
  e->value = value;
  return e;
}

BoolExprPtr make_node(BoolExpr::Kind kind, BoolExprPtr left, BoolExprPtr right) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = kind;
  e->left = std::move(left);
  e->right = std::move(right);
  return e;
}

void render(const BoolExpr& e, bool root, std::string& out) {
  if (e.kind == BoolExpr::Kind::kLiteral) {
    out += e.value ? "True" : "False";
    return;
  }
  if (!root) out += "( ";
  if (e.kind == BoolExpr::Kind::kNot) {
    out += "not ";
    render(*e.left, false, out);
  } else {
    render(*e.left, false, out);
    out += e.kind == BoolExpr::Kind::kAnd ? " and " : " or ";
    render(*e.right, false, out);
  }
  if (!root) out += " )";
}

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
      } else if (c == '(' || c == ')') {
        tokens_.emplace_back(1, c);
        ++i;
      } else {
        std::size_t start = i;
        while (i < text.size() && ((text[i] >= 'a' && text[i] <= 'z') ||
                                   (text[i] >= 'A' && text[i] <= 'Z'))) {
          ++i;
        }
        if (i == start) {
          ok_ = false;
          return;
        }
        tokens_.push_back(payload::to_lower(text.substr(start, i - start)));
      }
    }
  }

  std::optional<BoolExprPtr> run() {
    if (!ok_) return std::nullopt;
    auto e = disjunction(0);
    if (!e || pos_ != tokens_.size()) return std::nullopt;
    return e;
  }

 private:
  bool accept(std::string_view token) {
    if (pos_ < tokens_.size() && tokens_[pos_] == token) {
      ++pos_;
      return true;
    }
    return false;
  }

  BoolExprPtr disjunction(int depth) {
    auto left = conjunction(depth);
    while (left && accept("or")) {
      auto right = conjunction(depth);
      if (!right) return nullptr;
      left = make_node(BoolExpr::Kind::kOr, left, right);
    }
    return left;
  }

  BoolExprPtr conjunction(int depth) {
    auto left = negation(depth);
    while (left && accept("and")) {
      auto right = negation(depth);
      if (!right) return nullptr;
      left = make_node(BoolExpr::Kind::kAnd, left, right);
    }
    return left;
  }

  BoolExprPtr negation(int depth) {
    if (depth > kMaxParseNesting) return nullptr;
    if (accept("not")) {
      auto inner = negation(depth + 1);
      return inner ? make_node(BoolExpr::Kind::kNot, inner, nullptr) : nullptr;
    }
    if (accept("true")) return make_literal(true);
    if (accept("false")) return make_literal(false);
    if (accept("(")) {
      auto inner = disjunction(depth + 1);
      if (!inner || !accept(")")) return nullptr;
      return inner;
    }
    return nullptr;
  }

  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

BoolExprPtr read_expression(const Json& payload) {
  auto text = payload::require_string(payload, "expression");
  auto e = parse_boolexpr(text);
  if (!e) throw StructuralError("boolean_expressions: expression does not parse");
  return *e;
}

class BooleanTask : public tasks::TaskBase {
 public:
  BooleanTask()
      : TaskBase("boolean_expressions",
                 {tasks::int_param("depth", 0, kMaxDepth, 2, 4, "operator nesting depth")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return boolexpr_generate(params.get_small("depth"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_expression(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto e = read_expression(payload);
    if (!answer.is_boolean()) throw StructuralError("boolean_expressions: answer must be a bool");
    return answer.get<bool>() == boolexpr_eval(*e);
  }

  // "True" or "False", case-insensitive, with an optional final period.
  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    text = payload::trim(text);
    if (!text.empty() && text.back() == '.') text.remove_suffix(1);
    auto word = payload::to_lower(text);
    if (word == "true") return Json(true);
    if (word == "false") return Json(false);
    return std::nullopt;
  }

  std::string format_answer(const Json& answer) const override {
    if (!answer.is_boolean()) throw StructuralError("boolean_expressions: answer must be a bool");
    return answer.get<bool>() ? "True" : "False";
  }

  std::string render(const Json& payload) const override {
    return "Evaluate the following boolean expression. \"not\" binds tightest, then \"and\", "
           "then \"or\"; parentheses group as usual.\n\n" +
           payload::require_string(payload, "expression") + "\n\nAnswer True or False.";
  }
};

}  // namespace

bool boolexpr_eval(const BoolExpr& expr) {
  switch (expr.kind) {
    case BoolExpr::Kind::kLiteral: return expr.value;
    case BoolExpr::Kind::kNot: return !boolexpr_eval(*expr.left);
    case BoolExpr::Kind::kAnd: return boolexpr_eval(*expr.left) && boolexpr_eval(*expr.right);
    case BoolExpr::Kind::kOr: return boolexpr_eval(*expr.left) || boolexpr_eval(*expr.right);
  }
  return false;
}

int boolexpr_depth(const BoolExpr& expr) {
  switch (expr.kind) {
    case BoolExpr::Kind::kLiteral: return 0;
    case BoolExpr::Kind::kNot: return 1 + boolexpr_depth(*expr.left);
    default: return 1 + std::max(boolexpr_depth(*expr.left), boolexpr_depth(*expr.right));
  }
}

std::string to_string(const BoolExpr& expr) {
  std::string out;
  render(expr, true, out);
  return out;
}

std::optional<BoolExprPtr> parse_boolexpr(std::string_view text) { return Parser(text).run(); }

BoolExprPtr boolexpr_random(int depth, Rng& rng) {
  if (depth < 0) throw ParamError("boolean_expressions: depth must be non-negative");
  if (depth == 0) return make_literal(rng.chance(1, 2));
  switch (rng.below(3)) {
    case 0: return make_node(BoolExpr::Kind::kNot, boolexpr_random(depth - 1, rng), nullptr);
    default: {
      auto kind = rng.chance(1, 2) ? BoolExpr::Kind::kAnd : BoolExpr::Kind::kOr;
      auto deep = boolexpr_random(depth - 1, rng);
      auto other = boolexpr_random(static_cast<int>(rng.below(static_cast<std::uint64_t>(depth))), rng);
      if (rng.chance(1, 2)) std::swap(deep, other);
      return make_node(kind, deep, other);
    }
  }
}

Generated boolexpr_generate(int depth, Rng& rng) {
  if (depth > kMaxDepth) throw ParamError("boolean_expressions: depth must be at most 8");
  auto e = boolexpr_random(depth, rng);
  Json p = payload::new_payload();
  p["expression"] = to_string(*e);
  p["depth"] = depth;
  return Generated{std::move(p), Json(boolexpr_eval(*e))};
}

std::shared_ptr<const Task> make_boolean_expressions_task() {
  return std::make_shared<BooleanTask>();
}

}  // namespace logicforge::formal
