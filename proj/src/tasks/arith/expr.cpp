#include <algorithm>
#include <unordered_set>

#include "logicforge/core/errors.h"
#include "logicforge/tasks/arith.h"

namespace logicforge::arith {
namespace {

int precedence(char op) { return (op == '+' || op == '-') ? 1 : 2; }

std::optional<Rational> apply(char op, const Rational& a, const Rational& b) {
  switch (op) {
    case '+': return checked_add(a, b);
    case '-': return checked_sub(a, b);
    case '*': return checked_mul(a, b);
    case '/': return checked_div(a, b);
  }
  return std::nullopt;
}

void render(const Expr& e, std::string& out) {
  if (e.is_leaf()) {
    out += std::to_string(e.value);
    return;
  }
  int p = precedence(e.op);
  bool wrap_left = !e.left->is_leaf() && precedence(e.left->op) < p;
  bool wrap_right = !e.right->is_leaf() &&
                    (precedence(e.right->op) < p ||
                     (precedence(e.right->op) == p && (e.op == '-' || e.op == '/')));
  if (wrap_left) out += '(';
  render(*e.left, out);
  if (wrap_left) out += ')';
  out += e.op;
  if (wrap_right) out += '(';
  render(*e.right, out);
  if (wrap_right) out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::optional<ExprPtr> run() {
    auto e = expr(0);
    skip_space();
    if (!e || pos_ != text_.size()) return std::nullopt;
    return e;
  }

 private:
  static constexpr int kMaxDepth = 200;
  static constexpr std::size_t kMaxDigits = 12;

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  // Returns the ASCII operator at the cursor (mapping the Unicode forms) and
  // its byte length, or 0.
  std::pair<char, std::size_t> peek_op() {
    skip_space();
    if (pos_ >= text_.size()) return {0, 0};
    char c = text_[pos_];
    if (c == '+' || c == '-' || c == '*' || c == '/') return {c, 1};
    std::string_view rest = text_.substr(pos_);
    if (rest.starts_with("\xC3\x97")) return {'*', 2};
    if (rest.starts_with("\xC3\xB7")) return {'/', 2};
    if (rest.starts_with("\xE2\x88\x92")) return {'-', 3};
    return {0, 0};
  }

  ExprPtr expr(int depth) {
    ExprPtr left = term(depth);
    while (left) {
      auto [op, len] = peek_op();
      if (op != '+' && op != '-') break;
      pos_ += len;
      ExprPtr right = term(depth);
      if (!right) return nullptr;
      left = combine(op, left, right);
    }
    return left;
  }

  ExprPtr term(int depth) {
    ExprPtr left = factor(depth);
    while (left) {
      auto [op, len] = peek_op();
      if (op != '*' && op != '/') break;
      pos_ += len;
      ExprPtr right = factor(depth);
      if (!right) return nullptr;
      left = combine(op, left, right);
    }
    return left;
  }

  ExprPtr factor(int depth) {
    skip_space();
    if (pos_ >= text_.size()) return nullptr;
    if (text_[pos_] == '(') {
      if (depth >= kMaxDepth) return nullptr;
      ++pos_;
      ExprPtr inner = expr(depth + 1);
      skip_space();
      if (!inner || pos_ >= text_.size() || text_[pos_] != ')') return nullptr;
      ++pos_;
      return inner;
    }
    std::size_t start = pos_;
    std::int64_t value = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      if (pos_ - start >= kMaxDigits) return nullptr;
      value = value * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) return nullptr;
    return leaf(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_leaves(const Expr& e, std::vector<std::int64_t>& out) {
  if (e.is_leaf()) {
    out.push_back(e.value);
    return;
  }
  collect_leaves(*e.left, out);
  collect_leaves(*e.right, out);
}

void collect_ops(const Expr& e, std::string& out) {
  if (e.is_leaf()) return;
  collect_ops(*e.left, out);
  out += e.op;
  collect_ops(*e.right, out);
}

struct Item {
  Rational value;
  ExprPtr expr;
};

unsigned op_bit(char op) {
  switch (op) {
    case '+': return 1;
    case '-': return 2;
    case '*': return 4;
    default: return 8;
  }
}

class Searcher {
 public:
  Searcher(Rational target, const SearchOptions& options) : target_(target), options_(options) {}

  ExprPtr run(std::vector<Item> items) {
    ExprPtr found;
    search(items, 0, found);
    return found;
  }

 private:
  std::string state_key(const std::vector<Item>& items, unsigned used) const {
    std::vector<Rational> values;
    for (const auto& it : items) values.push_back(it.value);
    std::sort(values.begin(), values.end());
    std::string key = std::to_string(used);
    for (const auto& v : values) {
      key += ' ';
      key += v.str();
    }
    return key;
  }

  bool search(std::vector<Item>& items, unsigned used, ExprPtr& found) {
    if (options_.use_all) {
      if (items.size() == 1) {
        if (items[0].value == target_) {
          found = items[0].expr;
          return true;
        }
        return false;
      }
    } else {
      for (const auto& it : items) {
        if (!it.expr->is_leaf() && it.value == target_) {
          found = it.expr;
          return true;
        }
      }
      if (items.size() == 1) return false;
    }
    std::string key = state_key(items, used);
    if (dead_.count(key)) return false;

    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (i == j) continue;
        for (char op : options_.ops) {
          bool commutative = op == '+' || op == '*';
          if (commutative && j < i) continue;
          if (options_.each_op_once && (used & op_bit(op))) continue;
          auto value = apply(op, items[i].value, items[j].value);
          if (!value) continue;
          std::vector<Item> next;
          next.reserve(items.size() - 1);
          for (std::size_t k = 0; k < items.size(); ++k) {
            if (k != i && k != j) next.push_back(items[k]);
          }
          next.push_back(Item{*value, combine(op, items[i].expr, items[j].expr)});
          if (search(next, used | op_bit(op), found)) return true;
        }
      }
    }
    dead_.insert(std::move(key));
    return false;
  }

  Rational target_;
  const SearchOptions& options_;
  std::unordered_set<std::string> dead_;
};

}  // namespace

ExprPtr leaf(std::int64_t value) {
  auto e = std::make_shared<Expr>();
  e->value = value;
  return e;
}

ExprPtr combine(char op, ExprPtr left, ExprPtr right) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->left = std::move(left);
  e->right = std::move(right);
  return e;
}

std::optional<Rational> evaluate(const Expr& expr) {
  if (expr.is_leaf()) return Rational(expr.value);
  auto a = evaluate(*expr.left);
  if (!a) return std::nullopt;
  auto b = evaluate(*expr.right);
  if (!b) return std::nullopt;
  return apply(expr.op, *a, *b);
}

std::string to_string(const Expr& expr) {
  std::string out;
  render(expr, out);
  return out;
}

std::optional<ExprPtr> parse_expression(std::string_view text) { return Parser(text).run(); }

std::vector<std::int64_t> leaves(const Expr& expr) {
  std::vector<std::int64_t> out;
  collect_leaves(expr, out);
  return out;
}

std::string operators(const Expr& expr) {
  std::string out;
  collect_ops(expr, out);
  return out;
}

std::optional<ExprPtr> arith_expr_search(const std::vector<std::int64_t>& numbers,
                                         Rational target, const SearchOptions& options) {
  if (numbers.empty()) throw ParamError("arith_expr_search: at least one number is required");
  if (numbers.size() > kMaxSearchNumbers) {
    throw ParamError("arith_expr_search: at most " + std::to_string(kMaxSearchNumbers) +
                     " numbers are supported");
  }
  for (char op : options.ops) {
    if (op != '+' && op != '-' && op != '*' && op != '/') {
      throw ParamError(std::string("arith_expr_search: unknown operator '") + op + "'");
    }
  }
  std::vector<Item> items;
  for (auto n : numbers) items.push_back(Item{Rational(n), leaf(n)});
  Searcher searcher(target, options);
  ExprPtr found = searcher.run(std::move(items));
  if (!found) return std::nullopt;
  return found;
}

}  // namespace logicforge::arith
