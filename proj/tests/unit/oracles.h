#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance run. Each follows the puzzle rules directly and uses nothing from
// the library except Rng and Json.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logicforge/core/json.h"
#include "logicforge/core/rng.h"

namespace oracle {

struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Frac make(std::int64_t n, std::int64_t d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return Frac{n / g, d / g};
  }
  friend bool operator==(const Frac&, const Frac&) = default;
  friend bool operator<(const Frac& a, const Frac& b) {
    return a.num != b.num ? a.num < b.num : a.den < b.den;
  }
};

inline std::optional<Frac> apply(char op, Frac a, Frac b) {
  switch (op) {
    case '+': return Frac::make(a.num * b.den + b.num * a.den, a.den * b.den);
    case '-': return Frac::make(a.num * b.den - b.num * a.den, a.den * b.den);
    case '*': return Frac::make(a.num * b.num, a.den * b.den);
    default:
      if (b.num == 0) return std::nullopt;
      return Frac::make(a.num * b.den, a.den * b.num);
  }
}

// Random expression, fully parenthesized, with its value computed bottom-up.
struct ArithTree {
  std::string text;
  std::optional<Frac> value;
  std::vector<std::int64_t> leaves;
};

inline ArithTree random_arith(logicforge::Rng& rng, int leaves) {
  if (leaves == 1) {
    std::int64_t v = rng.uniform_int(0, 13);
    return ArithTree{std::to_string(v), Frac{v, 1}, {v}};
  }
  int left = rng.uniform_int(1, leaves - 1);
  ArithTree a = random_arith(rng, left), b = random_arith(rng, leaves - left);
  char op = "+-*/"[rng.below(4)];
  ArithTree out;
  out.text = "(" + a.text + op + b.text + ")";
  if (a.value && b.value) out.value = apply(op, *a.value, *b.value);
  out.leaves = a.leaves;
  out.leaves.insert(out.leaves.end(), b.leaves.begin(), b.leaves.end());
  return out;
}

// Every value reachable by combining all of `nums` with + - * /.
inline std::set<Frac> reachable_all(const std::vector<std::int64_t>& nums) {
  std::set<Frac> out;
  std::function<void(std::vector<Frac>)> rec = [&](std::vector<Frac> items) {
    if (items.size() == 1) {
      out.insert(items[0]);
      return;
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (i == j) continue;
        for (char op : std::string("+-*/")) {
          auto v = apply(op, items[i], items[j]);
          if (!v) continue;
          std::vector<Frac> next;
          for (std::size_t k = 0; k < items.size(); ++k) {
            if (k != i && k != j) next.push_back(items[k]);
          }
          next.push_back(*v);
          rec(next);
        }
      }
    }
  };
  std::vector<Frac> start;
  for (auto v : nums) start.push_back(Frac{v, 1});
  rec(start);
  return out;
}

// Values of expressions with at least one operator over any sub-multiset of
// `nums`, each operator used at most once.
inline std::set<Frac> reachable_mathador(const std::vector<std::int64_t>& nums) {
  std::set<Frac> out;
  std::function<void(std::vector<Frac>, std::string)> rec = [&](std::vector<Frac> items,
                                                                std::string unused) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (i == j) continue;
        for (std::size_t o = 0; o < unused.size(); ++o) {
          auto v = apply(unused[o], items[i], items[j]);
          if (!v) continue;
          out.insert(*v);
          std::vector<Frac> next;
          for (std::size_t k = 0; k < items.size(); ++k) {
            if (k != i && k != j) next.push_back(items[k]);
          }
          next.push_back(*v);
          std::string rest = unused;
          rest.erase(o, 1);
          rec(next, rest);
        }
      }
    }
  };
  std::vector<Frac> start;
  for (auto v : nums) start.push_back(Frac{v, 1});
  rec(start, "+-*/");
  return out;
}

// Digit assignments (distinct digits, no leading zero on words longer than one
// letter) under which the addends sum to `sum`.
inline int cryptarithm_solutions(const std::vector<std::string>& addends, const std::string& sum) {
  std::string letters;
  for (const auto& w : addends) letters += w;
  letters += sum;
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  std::vector<int> digit(26, -1);
  std::vector<bool> used(10, false);
  auto value = [&](const std::string& w) {
    std::int64_t v = 0;
    for (char c : w) v = v * 10 + digit[static_cast<std::size_t>(c - 'A')];
    return v;
  };
  int count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == letters.size()) {
      auto leading_zero = [&](const std::string& w) {
        return w.size() > 1 && digit[static_cast<std::size_t>(w[0] - 'A')] == 0;
      };
      if (leading_zero(sum)) return;
      std::int64_t total = 0;
      for (const auto& w : addends) {
        if (leading_zero(w)) return;
        total += value(w);
      }
      if (total == value(sum)) ++count;
      return;
    }
    for (int d = 0; d < 10; ++d) {
      if (used[static_cast<std::size_t>(d)]) continue;
      used[static_cast<std::size_t>(d)] = true;
      digit[static_cast<std::size_t>(letters[i] - 'A')] = d;
      rec(i + 1);
      used[static_cast<std::size_t>(d)] = false;
    }
  };
  rec(0);
  return count;
}

// Left-to-right with * and / binding tighter, exact rationals.
inline std::optional<Frac> eval_chain(const std::vector<std::int64_t>& operands, const std::string& ops) {
  std::vector<Frac> terms{Frac{operands[0], 1}};
  std::vector<char> signs;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    Frac next{operands[i + 1], 1};
    if (ops[i] == '*' || ops[i] == '/') {
      auto v = apply(ops[i], terms.back(), next);
      if (!v) return std::nullopt;
      terms.back() = *v;
    } else {
      signs.push_back(ops[i]);
      terms.push_back(next);
    }
  }
  Frac total = terms[0];
  for (std::size_t i = 0; i < signs.size(); ++i) total = *apply(signs[i], total, terms[i + 1]);
  return total;
}

inline bool math_path_holds(const logicforge::Json& p, const std::vector<int>& blanks) {
  int rows = p["rows"], cols = p["cols"];
  auto cells = p["cells"].get<std::vector<std::int64_t>>();
  std::size_t next = 0;
  for (auto& c : cells) {
    if (c == 0) c = blanks.at(next++);
  }
  auto row_ops = p["row_ops"].get<std::vector<std::string>>();
  auto col_ops = p["col_ops"].get<std::vector<std::string>>();
  auto row_results = p["row_results"].get<std::vector<std::int64_t>>();
  auto col_results = p["col_results"].get<std::vector<std::int64_t>>();
  for (int r = 0; r < rows; ++r) {
    std::vector<std::int64_t> line(cells.begin() + r * cols, cells.begin() + (r + 1) * cols);
    auto v = eval_chain(line, row_ops[static_cast<std::size_t>(r)]);
    if (!v || !(*v == Frac{row_results[static_cast<std::size_t>(r)], 1})) return false;
  }
  for (std::size_t c = 0; c < col_ops.size(); ++c) {
    std::vector<std::int64_t> line;
    for (int r = 0; r < rows; ++r) line.push_back(cells[static_cast<std::size_t>(r * cols) + c]);
    auto v = eval_chain(line, col_ops[c]);
    if (!v || !(*v == Frac{col_results[c], 1})) return false;
  }
  return true;
}

// Stack scan: 1-based index of the first character that cannot be part of any
// balanced completion, |s|+1 when only closers are missing, 0 when balanced.
inline std::size_t dyck_scan(const std::string& s) {
  const std::string open = "([{<", close = ")]}>";
  std::vector<char> stack;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto o = open.find(s[i]);
    if (o != std::string::npos) {
      stack.push_back(s[i]);
      continue;
    }
    auto c = close.find(s[i]);
    if (c == std::string::npos || stack.empty() || stack.back() != open[c]) return i + 1;
    stack.pop_back();
  }
  return stack.empty() ? 0 : s.size() + 1;
}

// Recursive descent for the boolean grammar: or < and < not < atom.
struct BoolParser {
  std::vector<std::string> tokens;
  std::size_t pos = 0;

  explicit BoolParser(const std::string& text) {
    std::string cur;
    for (char ch : text) {
      if (ch == ' ' || ch == '(' || ch == ')') {
        if (!cur.empty()) tokens.push_back(cur);
        cur.clear();
        if (ch != ' ') tokens.push_back(std::string(1, ch));
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) tokens.push_back(cur);
  }
  const std::string& peek() const {
    static const std::string end;
    return pos < tokens.size() ? tokens[pos] : end;
  }
  bool atom() {
    if (peek() == "(") {
      ++pos;
      bool v = disj();
      ++pos;  // ')'
      return v;
    }
    return tokens[pos++] == "True";
  }
  bool neg() {
    if (peek() == "not") {
      ++pos;
      return !neg();
    }
    return atom();
  }
  bool conj() {
    bool v = neg();
    while (peek() == "and") {
      ++pos;
      bool r = neg();
      v = v && r;
    }
    return v;
  }
  bool disj() {
    bool v = conj();
    while (peek() == "or") {
      ++pos;
      bool r = conj();
      v = v || r;
    }
    return v;
  }
};

inline bool bool_eval(const std::string& text) {
  BoolParser p(text);
  return p.disj();
}

// Lexicographic comparison by rank in `alphabet`, prefix first.
inline bool alpha_less(const std::string& a, const std::string& b, const std::string& alphabet) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    auto x = alphabet.find(a[i]), y = alphabet.find(b[i]);
    if (x != y) return x < y;
  }
  return a.size() < b.size();
}

}  // namespace oracle
