#include <algorithm>
#include <numeric>

#include "../task_base.h"
#include "logicforge/tasks/formal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::formal {
namespace {

constexpr int kMaxLength = 60;

int opener_kind(char c) {
  auto pos = kOpeners.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

int closer_kind(char c) {
  auto pos = kClosers.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

bool is_bracket(char c) { return opener_kind(c) >= 0 || closer_kind(c) >= 0; }

std::string read_brackets(const Json& payload, std::string_view key, std::size_t min_len) {
  auto s = payload::require_string(payload, key);
  if (s.size() < min_len || s.size() > static_cast<std::size_t>(kMaxLength)) {
    throw StructuralError("dyck: '" + std::string(key) + "' has unsupported length");
  }
  if (!std::all_of(s.begin(), s.end(), is_bracket)) {
    throw StructuralError("dyck: '" + std::string(key) + "' must contain only brackets");
  }
  return s;
}

// Brackets only, whitespace removed; nullopt on anything else.
std::optional<std::string> bracket_text(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (!is_bracket(c)) return std::nullopt;
    out += c;
  }
  return out;
}

std::string string_answer(const Json& answer, std::string_view task) {
  if (!answer.is_string()) throw StructuralError(std::string(task) + ": answer must be a string");
  return answer.get<std::string>();
}

std::int64_t integer_answer(const Json& answer, std::string_view task) {
  if (!answer.is_number_integer()) {
    throw StructuralError(std::string(task) + ": answer must be an integer");
  }
  return answer.get<std::int64_t>();
}

std::optional<Json> parse_integer_answer(std::string_view text) {
  auto v = payload::parse_integer(payload::trim(text));
  if (!v) return std::nullopt;
  return Json(*v);
}

// Stack contents after each character, bottom to top, as space-separated
// openers; "empty" for an empty stack. Assumes a balanced sequence.
std::vector<std::string> stack_trace(std::string_view s) {
  std::vector<std::string> out;
  std::string stack;
  for (char c : s) {
    if (opener_kind(c) >= 0) {
      stack += c;
    } else if (!stack.empty()) {
      stack.pop_back();
    }
    out.push_back(stack);
  }
  return out;
}

std::string show_stack(const std::string& stack) {
  if (stack.empty()) return "empty";
  std::string out;
  for (char c : stack) {
    if (!out.empty()) out += ' ';
    out += c;
  }
  return out;
}

std::vector<std::uint64_t> count_table(int length, int max_depth, bool reach_max) {
  // ways[(i * (H + 1) + d) * 2 + r]: completions from position i at depth d,
  // with r recording whether max_depth was reached already.
  int h = max_depth;
  std::vector<std::uint64_t> ways(static_cast<std::size_t>((length + 1) * (h + 1) * 2), 0);
  auto idx = [&](int i, int d, int r) { return static_cast<std::size_t>((i * (h + 1) + d) * 2 + r); };
  for (int r = 0; r < 2; ++r) ways[idx(length, 0, r)] = (r == 1 || !reach_max) ? 1 : 0;
  for (int i = length - 1; i >= 0; --i) {
    for (int d = 0; d <= h; ++d) {
      for (int r = 0; r < 2; ++r) {
        std::uint64_t total = 0;
        if (d < h) total += ways[idx(i + 1, d + 1, (r == 1 || d + 1 == h) ? 1 : 0)];
        if (d > 0) total += ways[idx(i + 1, d - 1, r)];
        ways[idx(i, d, r)] = total;
      }
    }
  }
  return ways;
}

class DyckTask : public tasks::TaskBase {
 public:
  DyckTask()
      : TaskBase("dyck_language",
                 {tasks::int_param("length", 2, kMaxLength, 10, 20, "length of the full sequence"),
                  tasks::int_param("max_depth", 1, kMaxLength / 2, 3, 5, "deepest nesting"),
                  tasks::int_param("kinds", 1, 4, 2, 4, "bracket kinds in use"),
                  tasks::int_param("prefix_cut", 1, kMaxLength - 1, 6, 12,
                                   "characters shown before the completion")}) {}

  void check_params(const DifficultyParams& params) const override {
    int length = params.get_small("length");
    int depth = params.get_small("max_depth");
    int cut = params.get_small("prefix_cut");
    if (length % 2 != 0) throw ParamError("dyck_language: length must be even");
    if (2 * depth > length) throw ParamError("dyck_language: max_depth needs length >= 2*max_depth");
    if (cut >= length) throw ParamError("dyck_language: prefix_cut must be less than length");
    if (depth == 1 && cut % 2 == 0) {
      throw ParamError("dyck_language: with max_depth 1 an even prefix_cut is always balanced");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return dyck_generate(params.get_small("length"), params.get_small("max_depth"),
                         params.get_small("kinds"), params.get_small("prefix_cut"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_brackets(payload, "prefix", 1);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto prefix = read_brackets(payload, "prefix", 1);
    auto candidate = string_answer(answer, "dyck_language");
    auto open = dyck_complete(prefix);
    if (!open) return false;
    return dyck_first_violation(prefix + candidate) == 0 && candidate.size() == open->size();
  }

  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    auto s = bracket_text(text);
    if (!s || s->empty()) return std::nullopt;
    return Json(*s);
  }

  std::string format_answer(const Json& answer) const override {
    return string_answer(answer, "dyck_language");
  }

  std::string render(const Json& payload) const override {
    auto prefix = read_brackets(payload, "prefix", 1);
    return "Complete the following bracket sequence so that it is properly balanced: every "
           "opening bracket must be closed by the matching closing bracket of the same kind, in "
           "the right order. Append as few characters as possible.\n\nSequence: " +
           prefix + "\n\nGive only the closing brackets to append, for example )].";
  }
};

class DyckErrorsTask : public tasks::TaskBase {
 public:
  DyckErrorsTask()
      : TaskBase("dyck_language_errors",
                 {tasks::int_param("length", 2, kMaxLength, 8, 16, "length of the sequence"),
                  tasks::int_param("kinds", 1, 4, 2, 3, "bracket kinds in use"),
                  tasks::int_param("num_errors", 1, 10, 1, 2, "corrupted characters or wrong steps"),
                  tasks::int_param("reasoning", 0, 1, 0, 1,
                                   "1 asks for the wrong step of a stack trace")}) {}

  void check_params(const DifficultyParams& params) const override {
    int length = params.get_small("length");
    if (length % 2 != 0) throw ParamError("dyck_language_errors: length must be even");
    if (params.get_small("num_errors") > length) {
      throw ParamError("dyck_language_errors: num_errors must be at most length");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return dyck_errors_generate(params.get_small("length"), params.get_small("kinds"),
                                params.get_small("num_errors"), params.get_small("reasoning") == 1,
                                rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    auto mode = payload::require_string(payload, "mode");
    auto seq = read_brackets(payload, "sequence", 1);
    if (mode == "index") return;
    if (mode != "reasoning") throw StructuralError("dyck_language_errors: unknown mode " + mode);
    if (dyck_first_violation(seq) != 0) {
      throw StructuralError("dyck_language_errors: traced sequence must be balanced");
    }
    const Json& steps = payload::require_array(payload, "steps", seq.size(), seq.size());
    for (const auto& s : steps) {
      if (!s.is_string()) throw StructuralError("dyck_language_errors: steps must be strings");
    }
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto mode = payload::require_string(payload, "mode");
    auto seq = read_brackets(payload, "sequence", 1);
    auto candidate = integer_answer(answer, "dyck_language_errors");
    if (mode == "index") {
      auto truth = dyck_first_violation(seq);
      return truth != 0 && candidate == static_cast<std::int64_t>(truth);
    }
    const Json& steps = payload::require_array(payload, "steps", seq.size(), seq.size());
    auto trace = stack_trace(seq);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (!steps[i].is_string()) throw StructuralError("dyck_language_errors: steps must be strings");
      if (steps[i].get<std::string>() != show_stack(trace[i])) {
        return candidate == static_cast<std::int64_t>(i + 1);
      }
    }
    return false;
  }

  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    return parse_integer_answer(text);
  }

  std::string format_answer(const Json& answer) const override {
    return std::to_string(integer_answer(answer, "dyck_language_errors"));
  }

  std::string render(const Json& payload) const override {
    auto mode = payload::require_string(payload, "mode");
    auto seq = read_brackets(payload, "sequence", 1);
    if (mode == "index") {
      return "The following bracket sequence was meant to be balanced, with every opening "
             "bracket closed by the matching closing bracket of the same kind, but it contains "
             "errors.\n\nSequence: " +
             seq +
             "\n\nFind the first error: the 1-based position of the first character after which "
             "no continuation could make the sequence balanced. If every character is fine but "
             "some brackets are still open at the end, the answer is " +
             std::to_string(seq.size() + 1) +
             " (one past the last position).\n\nGive a single integer.";
    }
    const Json& steps = payload::require_array(payload, "steps", seq.size(), seq.size());
    std::string out =
        "Someone checked whether the bracket sequence " + seq +
        " is balanced by reading it one character at a time and keeping a stack of open "
        "brackets: an opening bracket is pushed, a closing bracket pops its matching opener. "
        "After each step they wrote down the stack, bottom to top.\n";
    for (std::size_t i = 0; i < seq.size(); ++i) {
      out += "\nStep " + std::to_string(i + 1) + ": read " + seq[i] + ", stack: " +
             steps[i].get<std::string>();
    }
    out += "\n\nAt least one step shows the wrong stack. Which step is the first one with a "
           "mistake? Give its step number as a single integer.";
    return out;
  }
};

}  // namespace

std::optional<std::string> dyck_complete(std::string_view prefix) {
  std::string stack;
  for (char c : prefix) {
    int open = opener_kind(c);
    if (open >= 0) {
      stack += c;
      continue;
    }
    int close = closer_kind(c);
    if (close < 0 || stack.empty() || opener_kind(stack.back()) != close) return std::nullopt;
    stack.pop_back();
  }
  std::string out;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    out += kClosers[static_cast<std::size_t>(opener_kind(*it))];
  }
  return out;
}

std::size_t dyck_first_violation(std::string_view s) {
  std::string stack;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (opener_kind(c) >= 0) {
      stack += c;
      continue;
    }
    int close = closer_kind(c);
    if (close < 0 || stack.empty() || opener_kind(stack.back()) != close) return i + 1;
    stack.pop_back();
  }
  return stack.empty() ? 0 : s.size() + 1;
}

std::string dyck_sample(int length, int max_depth, int kinds, bool reach_max, Rng& rng) {
  if (length < 0 || length > kMaxLength || length % 2 != 0) {
    throw ParamError("dyck: length must be even and at most " + std::to_string(kMaxLength));
  }
  if (kinds < 1 || kinds > 4) throw ParamError("dyck: kinds must be in [1, 4]");
  if (max_depth < 1 || (reach_max && 2 * max_depth > length)) {
    throw ParamError("dyck: no sequence of length " + std::to_string(length) +
                     " reaches depth " + std::to_string(max_depth));
  }
  auto ways = count_table(length, max_depth, reach_max);
  auto idx = [&](int i, int d, int r) {
    return static_cast<std::size_t>((i * (max_depth + 1) + d) * 2 + r);
  };
  if (ways[idx(0, 0, 0)] == 0) throw ParamError("dyck: infeasible length/depth combination");

  std::string out, stack;
  int depth = 0, reached = 0;
  for (int i = 0; i < length; ++i) {
    std::uint64_t up = 0;
    int up_reached = (reached == 1 || depth + 1 == max_depth) ? 1 : 0;
    if (depth < max_depth) up = ways[idx(i + 1, depth + 1, up_reached)];
    std::uint64_t total = ways[idx(i, depth, reached)];
    if (rng.below(total) < up) {
      char c = kOpeners[rng.below(static_cast<std::uint64_t>(kinds))];
      out += c;
      stack += c;
      ++depth;
      reached = up_reached;
    } else {
      out += kClosers[static_cast<std::size_t>(opener_kind(stack.back()))];
      stack.pop_back();
      --depth;
    }
  }
  return out;
}

Corruption dyck_corrupt(std::string_view sequence, int num_errors, Rng& rng) {
  if (dyck_first_violation(sequence) != 0 || sequence.empty()) {
    throw ParamError("dyck_corrupt: sequence must be balanced and non-empty");
  }
  if (num_errors < 1 || num_errors > static_cast<int>(sequence.size())) {
    throw ParamError("dyck_corrupt: num_errors must be in [1, |sequence|]");
  }
  std::string alphabet;
  for (std::size_t k = 0; k < kOpeners.size(); ++k) {
    if (sequence.find(kOpeners[k]) != std::string_view::npos) {
      alphabet += kOpeners[k];
      alphabet += kClosers[k];
    }
  }
  std::vector<std::size_t> positions(sequence.size());
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    rng.shuffle(positions);
    std::string out(sequence);
    for (int e = 0; e < num_errors; ++e) {
      std::size_t pos = positions[static_cast<std::size_t>(e)];
      std::string choices;
      for (char c : alphabet) {
        if (c != out[pos]) choices += c;
      }
      out[pos] = choices[rng.below(choices.size())];
    }
    auto violation = dyck_first_violation(out);
    if (violation != 0) return Corruption{out, violation};
  }
  throw ParamError("dyck_corrupt: could not produce an unbalanced sequence");
}

Generated dyck_generate(int length, int max_depth, int kinds, int prefix_cut, Rng& rng) {
  if (prefix_cut < 1 || prefix_cut >= length) {
    throw ParamError("dyck_language: prefix_cut must be in [1, length)");
  }
  if (max_depth == 1 && prefix_cut % 2 == 0) {
    throw ParamError("dyck_language: with max_depth 1 an even prefix_cut is always balanced");
  }
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    auto full = dyck_sample(length, max_depth, kinds, true, rng);
    auto prefix = full.substr(0, static_cast<std::size_t>(prefix_cut));
    auto completion = dyck_complete(prefix);
    if (!completion || completion->empty()) continue;
    Json p = payload::new_payload();
    p["prefix"] = prefix;
    return Generated{std::move(p), Json(*completion)};
  }
  throw GenerationExhausted("dyck_language: every prefix was already balanced",
                            kMaxGenerationAttempts);
}

Generated dyck_errors_generate(int length, int kinds, int num_errors, bool reasoning, Rng& rng) {
  if (length < 2) throw ParamError("dyck_language_errors: length must be at least 2");
  auto seq = dyck_sample(length, length / 2, kinds, false, rng);
  Json p = payload::new_payload();
  if (!reasoning) {
    auto bad = dyck_corrupt(seq, num_errors, rng);
    p["mode"] = "index";
    p["sequence"] = bad.sequence;
    return Generated{std::move(p), Json(static_cast<std::int64_t>(bad.first_violation))};
  }

  auto trace = stack_trace(seq);
  std::vector<std::size_t> steps(trace.size());
  std::iota(steps.begin(), steps.end(), std::size_t{0});
  rng.shuffle(steps);
  steps.resize(static_cast<std::size_t>(std::min<int>(num_errors, length)));
  std::string openers;
  for (char c : seq) {
    if (opener_kind(c) >= 0 && openers.find(c) == std::string::npos) openers += c;
  }
  std::vector<std::string> shown;
  for (const auto& s : trace) shown.push_back(show_stack(s));
  for (auto i : steps) {
    std::string wrong = trace[i];
    auto option = rng.below(wrong.empty() ? 1 : 3);
    if (option == 0) {
      wrong += openers[rng.below(openers.size())];
    } else if (option == 1 || openers.size() == 1) {
      wrong.pop_back();
    } else {
      std::string others;
      for (char c : openers) {
        if (c != wrong.back()) others += c;
      }
      wrong.back() = others[rng.below(others.size())];
    }
    shown[i] = show_stack(wrong);
  }
  p["mode"] = "reasoning";
  p["sequence"] = seq;
  p["steps"] = shown;
  auto first = *std::min_element(steps.begin(), steps.end());
  return Generated{std::move(p), Json(static_cast<std::int64_t>(first + 1))};
}

std::shared_ptr<const Task> make_dyck_task() { return std::make_shared<DyckTask>(); }
std::shared_ptr<const Task> make_dyck_errors_task() { return std::make_shared<DyckErrorsTask>(); }

}  // namespace logicforge::formal
