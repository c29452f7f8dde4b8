#include <algorithm>
#include <array>
#include <numeric>

#include "../task_base.h"
#include "logicforge/tasks/arith.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::arith {
namespace {

constexpr std::size_t kMaxWordLength = 10;
constexpr std::size_t kMaxAddends = 10;

struct Puzzle {
  std::vector<std::string> addends;
  std::string sum;

  // Distinct letters in alphabetical order.
  std::string letters() const {
    std::string out;
    auto add = [&](const std::string& w) {
      for (char c : w) {
        if (out.find(c) == std::string::npos) out += c;
      }
    };
    for (const auto& w : addends) add(w);
    add(sum);
    std::sort(out.begin(), out.end());
    return out;
  }
};

std::string read_word(const Json& v) {
  if (!v.is_string()) throw StructuralError("cryptarithm: words must be strings");
  auto w = v.get<std::string>();
  if (w.empty() || w.size() > kMaxWordLength) {
    throw StructuralError("cryptarithm: word length must be in [1, 10]");
  }
  for (char c : w) {
    if (c < 'A' || c > 'Z') throw StructuralError("cryptarithm: words use letters A-Z only");
  }
  return w;
}

Puzzle read_puzzle(const Json& payload) {
  Puzzle p;
  for (const auto& v : payload::require_array(payload, "addends", 2, kMaxAddends)) {
    p.addends.push_back(read_word(v));
  }
  p.sum = read_word(payload::require_field(payload, "sum"));
  if (p.letters().size() > 10) throw StructuralError("cryptarithm: more than 10 distinct letters");
  return p;
}

std::int64_t word_value(const std::string& w, const std::array<int, 26>& digit) {
  std::int64_t v = 0;
  for (char c : w) v = v * 10 + digit[static_cast<std::size_t>(c - 'A')];
  return v;
}

class Counter {
 public:
  Counter(const std::vector<std::string>& addends, const std::string& sum, std::uint64_t limit)
      : limit_(limit), width_(sum.size()) {
    auto mark_leading = [&](const std::string& w) {
      if (w.size() > 1) leading_[static_cast<std::size_t>(w[0] - 'A')] = true;
    };
    for (const auto& w : addends) mark_leading(w);
    mark_leading(sum);
    columns_.resize(width_);
    sum_letter_.resize(width_);
    for (std::size_t c = 0; c < width_; ++c) {
      sum_letter_[c] = sum[sum.size() - 1 - c] - 'A';
      for (const auto& w : addends) {
        if (c < w.size()) columns_[c].push_back(w[w.size() - 1 - c] - 'A');
      }
    }
    digit_.fill(-1);
  }

  std::uint64_t run() {
    column(0, 0);
    return count_;
  }

 private:
  bool can_use(int letter, int d) const {
    return !used_[static_cast<std::size_t>(d)] &&
           !(d == 0 && leading_[static_cast<std::size_t>(letter)]);
  }

  void set(int letter, int d) {
    digit_[static_cast<std::size_t>(letter)] = d;
    used_[static_cast<std::size_t>(d)] = true;
  }

  void clear(int letter, int d) {
    digit_[static_cast<std::size_t>(letter)] = -1;
    used_[static_cast<std::size_t>(d)] = false;
  }

  void column(std::size_t c, int carry) {
    if (count_ >= limit_) return;
    if (c == width_) {
      if (carry == 0) ++count_;
      return;
    }
    place(c, 0, carry);
  }

  void place(std::size_t c, std::size_t k, int carry) {
    if (count_ >= limit_) return;
    const auto& letters = columns_[c];
    if (k == letters.size()) {
      int s = carry;
      for (int l : letters) s += digit_[static_cast<std::size_t>(l)];
      int d = s % 10;
      int target = sum_letter_[c];
      int current = digit_[static_cast<std::size_t>(target)];
      if (current >= 0) {
        if (current == d) column(c + 1, s / 10);
      } else if (can_use(target, d)) {
        set(target, d);
        column(c + 1, s / 10);
        clear(target, d);
      }
      return;
    }
    int letter = letters[k];
    if (digit_[static_cast<std::size_t>(letter)] >= 0) {
      place(c, k + 1, carry);
      return;
    }
    for (int d = 0; d < 10; ++d) {
      if (!can_use(letter, d)) continue;
      set(letter, d);
      place(c, k + 1, carry);
      clear(letter, d);
    }
  }

  std::uint64_t limit_;
  std::size_t width_;
  std::vector<std::vector<int>> columns_;
  std::vector<int> sum_letter_;
  std::array<int, 26> digit_{};
  std::array<bool, 10> used_{};
  std::array<bool, 26> leading_{};
  std::uint64_t count_ = 0;
};

class CryptarithmTask : public tasks::TaskBase {
 public:
  CryptarithmTask()
      : TaskBase("cryptarithm",
                 {tasks::int_param("num_addends", 2, 5, 2, 3, "words added together"),
                  tasks::int_param("word_len", 2, 6, 3, 4, "letters per addend")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return cryptarithm_generate(params.get_small("num_addends"), params.get_small("word_len"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_puzzle(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto puzzle = read_puzzle(payload);
    std::string letters = puzzle.letters();
    if (!answer.is_object() || answer.size() != letters.size()) {
      throw StructuralError("cryptarithm: answer must map every puzzle letter to a digit");
    }
    std::array<int, 26> digit{};
    std::array<bool, 10> used{};
    for (char c : letters) {
      auto it = answer.find(std::string(1, c));
      if (it == answer.end() || !it->is_number_integer()) {
        throw StructuralError(std::string("cryptarithm: missing digit for letter ") + c);
      }
      auto d = it->get<std::int64_t>();
      if (d < 0 || d > 9 || used[static_cast<std::size_t>(d)]) return false;
      used[static_cast<std::size_t>(d)] = true;
      digit[static_cast<std::size_t>(c - 'A')] = static_cast<int>(d);
    }
    auto leading_zero = [&](const std::string& w) {
      return w.size() > 1 && digit[static_cast<std::size_t>(w[0] - 'A')] == 0;
    };
    std::int64_t total = 0;
    for (const auto& w : puzzle.addends) {
      if (leading_zero(w)) return false;
      total += word_value(w, digit);
    }
    if (leading_zero(puzzle.sum)) return false;
    return total == word_value(puzzle.sum, digit);
  }

  // Grammar: LETTER '=' DIGIT pairs separated by commas, semicolons or
  // whitespace; letters are case-insensitive and must cover the puzzle letters
  // exactly once each.
  std::optional<Json> parse_answer(const Json& payload, std::string_view text) const override {
    std::string letters;
    try {
      letters = read_puzzle(payload).letters();
    } catch (const StructuralError&) {
      return std::nullopt;
    }
    std::array<int, 26> digit;
    digit.fill(-1);
    std::size_t i = 0;
    auto skip = [&](bool separators) {
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                                 text[i] == '\r' ||
                                 (separators && (text[i] == ',' || text[i] == ';')))) {
        ++i;
      }
    };
    std::size_t pairs = 0;
    for (skip(true); i < text.size(); skip(true)) {
      char c = text[i];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c < 'A' || c > 'Z') return std::nullopt;
      ++i;
      skip(false);
      if (i >= text.size() || text[i] != '=') return std::nullopt;
      ++i;
      skip(false);
      if (i >= text.size() || text[i] < '0' || text[i] > '9') return std::nullopt;
      int d = text[i] - '0';
      ++i;
      if (i < text.size() && text[i] >= '0' && text[i] <= '9') return std::nullopt;
      auto& slot = digit[static_cast<std::size_t>(c - 'A')];
      if (slot >= 0 || letters.find(c) == std::string::npos) return std::nullopt;
      slot = d;
      ++pairs;
    }
    if (pairs != letters.size()) return std::nullopt;
    Json out = Json::object();
    for (char c : letters) out[std::string(1, c)] = digit[static_cast<std::size_t>(c - 'A')];
    return out;
  }

  std::string format_answer(const Json& answer) const override {
    if (!answer.is_object()) throw StructuralError("cryptarithm: answer must be an object");
    std::vector<std::string> parts;
    for (const auto& [k, v] : answer.items()) parts.push_back(k + "=" + v.dump());
    return payload::join(parts, ", ");
  }

  std::string render(const Json& payload) const override {
    auto puzzle = read_puzzle(payload);
    std::string letters = puzzle.letters();
    std::vector<std::string> names;
    for (char c : letters) names.push_back(std::string(1, c));
    return "Solve the cryptarithm:\n\n" + payload::join(puzzle.addends, " + ") + " = " +
           puzzle.sum +
           "\n\nEach letter stands for a different digit from 0 to 9, and the first letter of a "
           "word with more than one letter is never 0. The letters are " +
           payload::join(names, ", ") +
           ".\n\nGive the digit of every letter as letter=digit pairs separated by commas, for "
           "example A=1, B=2.";
  }
};

}  // namespace

std::uint64_t cryptarithm_count(const std::vector<std::string>& addends, const std::string& sum,
                                std::uint64_t limit) {
  std::string letters;
  std::size_t longest = 0;
  for (const auto& w : addends) {
    letters += w;
    longest = std::max(longest, w.size());
  }
  letters += sum;
  for (char c : letters) {
    if (c < 'A' || c > 'Z') throw ParamError("cryptarithm: words use letters A-Z only");
  }
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  if (letters.size() > 10 || sum.empty() || longest > sum.size()) return 0;
  return Counter(addends, sum, limit).run();
}

Generated cryptarithm_generate(int num_addends, int word_len, Rng& rng) {
  if (num_addends < 2 || num_addends > static_cast<int>(kMaxAddends)) {
    throw ParamError("cryptarithm: num_addends must be in [2, 10]");
  }
  if (word_len < 1 || word_len > 9) throw ParamError("cryptarithm: word_len must be in [1, 9]");
  std::int64_t lo = 1;
  for (int i = 1; i < word_len; ++i) lo *= 10;
  std::int64_t hi = lo * 10 - 1;
  if (word_len == 1) lo = 0;

  std::vector<char> alphabet;
  for (char c = 'A'; c <= 'Z'; ++c) alphabet.push_back(c);

  std::vector<int> digits(10);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    // Uniformly drawn words are almost never uniquely solvable, so every other
    // attempt draws digits from a small palette; repeated letters pin the
    // assignment down far more often.
    bool palette = attempt % 2 == 1;
    int palette_size = 10;
    if (palette) {
      std::iota(digits.begin(), digits.end(), 0);
      rng.shuffle(digits);
      palette_size = rng.uniform_int(2, 5);
    }
    std::vector<std::int64_t> values;
    std::int64_t total = 0;
    for (int i = 0; i < num_addends; ++i) {
      if (!palette) {
        values.push_back(rng.range(lo, hi));
      } else {
        std::int64_t v = 0;
        for (int k = 0; k < word_len; ++k) {
          int d;
          do {
            d = digits[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(palette_size)))];
          } while (k == 0 && d == 0 && word_len > 1);
          v = v * 10 + d;
        }
        values.push_back(v);
      }
      total += values.back();
    }
    rng.shuffle(alphabet);
    auto spell = [&](std::int64_t v) {
      std::string digits = std::to_string(v);
      for (auto& ch : digits) ch = alphabet[static_cast<std::size_t>(ch - '0')];
      return digits;
    };
    std::vector<std::string> addends;
    for (auto v : values) addends.push_back(spell(v));
    std::string sum = spell(total);
    if (cryptarithm_count(addends, sum, 2) != 1) continue;

    Json p = payload::new_payload();
    p["addends"] = addends;
    p["sum"] = sum;
    Puzzle puzzle{addends, sum};
    Json answer = Json::object();
    for (char c : puzzle.letters()) {
      auto pos = std::find(alphabet.begin(), alphabet.end(), c) - alphabet.begin();
      answer[std::string(1, c)] = static_cast<int>(pos);
    }
    return Generated{std::move(p), std::move(answer)};
  }
  throw GenerationExhausted("cryptarithm: no uniquely solvable puzzle found",
                            kMaxGenerationAttempts);
}

std::shared_ptr<const Task> make_cryptarithm_task() { return std::make_shared<CryptarithmTask>(); }

}  // namespace logicforge::arith
