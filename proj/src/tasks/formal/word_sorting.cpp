#include <algorithm>
#include <numeric>

#include "../task_base.h"
#include "logicforge/tasks/corpus.h"
#include "logicforge/tasks/formal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::formal {
namespace {

constexpr std::size_t kMaxWords = 40;

bool is_word(const std::string& w) {
  return !w.empty() && w.size() <= 30 &&
         std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string read_alphabet(const Json& payload) {
  auto a = payload::require_string(payload, "alphabet");
  std::string sorted = a;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != "abcdefghijklmnopqrstuvwxyz") {
    throw StructuralError("word sorting: alphabet must be a permutation of a-z");
  }
  return a;
}

std::vector<std::string> read_words(const Json& j, std::string_view what) {
  if (!j.is_array()) throw StructuralError(std::string(what) + " must be an array of words");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string() || !is_word(v.get<std::string>())) {
      throw StructuralError(std::string(what) + " must hold lowercase a-z words");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::string> read_payload_words(const Json& payload) {
  auto words = read_words(payload::require_array(payload, "words", 2, kMaxWords), "words");
  auto sorted = words;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw StructuralError("word sorting: words must be distinct");
  }
  return words;
}

// The list after each insertion-sort step.
std::vector<std::vector<std::string>> insertion_trace(const std::vector<std::string>& words,
                                                      std::string_view alphabet) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  for (const auto& w : words) {
    auto pos = std::upper_bound(current.begin(), current.end(), w,
                                [&](const std::string& a, const std::string& b) {
                                  return wordsort_less(a, b, alphabet);
                                });
    current.insert(pos, w);
    out.push_back(current);
  }
  return out;
}

std::string spaced(std::string_view letters) {
  std::string out;
  for (char c : letters) {
    if (!out.empty()) out += ' ';
    out += c;
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words) { return payload::join(words, " "); }

std::string order_rules(const std::string& alphabet) {
  return "Use this custom alphabet, from first to last letter: " + spaced(alphabet) +
         ". Words are compared letter by letter using this order, and a word comes before any "
         "longer word that starts with it.";
}

std::vector<std::string> sample_words(int count, Rng& rng) {
  const auto& corpus = corpus::words();
  std::vector<std::string> out;
  while (out.size() < static_cast<std::size_t>(count)) {
    std::string w(rng.pick(corpus));
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  }
  return out;
}

std::string sample_alphabet(Rng& rng) {
  std::string a = "abcdefghijklmnopqrstuvwxyz";
  rng.shuffle(a);
  return a;
}

class WordSortingTask : public tasks::TaskBase {
 public:
  WordSortingTask()
      : TaskBase("word_sorting",
                 {tasks::int_param("num_words", 2, static_cast<std::int64_t>(kMaxWords), 5, 12,
                                   "words to sort")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return wordsort_generate(params.get_small("num_words"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_alphabet(payload);
    read_payload_words(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto expected = wordsort_order(read_payload_words(payload), read_alphabet(payload));
    if (!answer.is_array()) throw StructuralError("word_sorting: answer must be a list of words");
    std::vector<std::string> got;
    for (const auto& v : answer) {
      if (!v.is_string()) throw StructuralError("word_sorting: answer must be a list of words");
      got.push_back(v.get<std::string>());
    }
    return got == expected;
  }

  // Words separated by whitespace or commas; case-insensitive.
  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    auto tokens = payload::split_tokens(text);
    if (tokens.empty()) return std::nullopt;
    Json out = Json::array();
    for (auto t : tokens) {
      auto w = payload::to_lower(t);
      if (!is_word(w)) return std::nullopt;
      out.push_back(w);
    }
    return out;
  }

  std::string format_answer(const Json& answer) const override {
    return join_words(read_words(answer, "word_sorting answer"));
  }

  std::string render(const Json& payload) const override {
    return "Sort the following words in ascending order. " + order_rules(read_alphabet(payload)) +
           "\n\nWords: " + join_words(read_payload_words(payload)) +
           "\n\nGive the sorted words separated by spaces.";
  }
};

class WordSortingMistakeTask : public tasks::TaskBase {
 public:
  WordSortingMistakeTask()
      : TaskBase("word_sorting_mistake",
                 {tasks::int_param("num_words", 3, 20, 5, 10, "words in the sort trace")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return wordsort_mistake_generate(params.get_small("num_words"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_alphabet(payload);
    auto words = read_payload_words(payload);
    const Json& steps = payload::require_array(payload, "steps", words.size(), words.size());
    for (const auto& s : steps) read_words(s, "steps");
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto words = read_payload_words(payload);
    auto trace = insertion_trace(words, read_alphabet(payload));
    const Json& steps = payload::require_array(payload, "steps", words.size(), words.size());
    if (!answer.is_number_integer()) {
      throw StructuralError("word_sorting_mistake: answer must be an integer");
    }
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (read_words(steps[i], "steps") != trace[i]) {
        return answer.get<std::int64_t>() == static_cast<std::int64_t>(i + 1);
      }
    }
    return false;
  }

  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    auto v = payload::parse_integer(payload::trim(text));
    if (!v) return std::nullopt;
    return Json(*v);
  }

  std::string format_answer(const Json& answer) const override {
    if (!answer.is_number_integer()) {
      throw StructuralError("word_sorting_mistake: answer must be an integer");
    }
    return std::to_string(answer.get<std::int64_t>());
  }

  std::string render(const Json& payload) const override {
    auto words = read_payload_words(payload);
    const Json& steps = payload::require_array(payload, "steps", words.size(), words.size());
    std::string out = "Someone sorted the words " + join_words(words) +
                      " by insertion: starting from an empty list, each step inserts the next "
                      "word into its place in the sorted list. " +
                      order_rules(read_alphabet(payload)) + "\n";
    for (std::size_t i = 0; i < words.size(); ++i) {
      out += "\nStep " + std::to_string(i + 1) + ": insert " + words[i] + " -> " +
             join_words(read_words(steps[i], "steps"));
    }
    out += "\n\nExactly one step shows a wrong list. Which step is it? Give its step number as a "
           "single integer.";
    return out;
  }
};

}  // namespace

bool wordsort_less(std::string_view a, std::string_view b, std::string_view alphabet) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return alphabet.find(a[i]) < alphabet.find(b[i]);
  }
  return a.size() < b.size();
}

std::vector<std::string> wordsort_order(std::vector<std::string> words, std::string_view alphabet) {
  std::stable_sort(words.begin(), words.end(), [&](const std::string& a, const std::string& b) {
    return wordsort_less(a, b, alphabet);
  });
  return words;
}

Generated wordsort_generate(int num_words, Rng& rng) {
  if (num_words < 2 || num_words > static_cast<int>(kMaxWords)) {
    throw ParamError("word_sorting: num_words must be in [2, 40]");
  }
  auto words = sample_words(num_words, rng);
  auto alphabet = sample_alphabet(rng);
  Json p = payload::new_payload();
  p["alphabet"] = alphabet;
  p["words"] = words;
  return Generated{std::move(p), Json(wordsort_order(words, alphabet))};
}

Generated wordsort_mistake_generate(int num_words, Rng& rng) {
  if (num_words < 3 || num_words > 20) {
    throw ParamError("word_sorting_mistake: num_words must be in [3, 20]");
  }
  auto words = sample_words(num_words, rng);
  auto alphabet = sample_alphabet(rng);
  auto trace = insertion_trace(words, alphabet);

  // The wrong step puts its word somewhere other than its sorted place; step 1
  // has only one place, so the mistake goes at step 2 or later.
  auto step = static_cast<std::size_t>(rng.uniform_int(2, num_words));
  auto& list = trace[step - 1];
  const auto& word = words[step - 1];
  auto at = static_cast<std::size_t>(std::find(list.begin(), list.end(), word) - list.begin());
  list.erase(list.begin() + static_cast<std::ptrdiff_t>(at));
  auto wrong = static_cast<std::size_t>(rng.below(list.size()));
  if (wrong >= at) ++wrong;
  list.insert(list.begin() + static_cast<std::ptrdiff_t>(wrong), word);

  Json p = payload::new_payload();
  p["alphabet"] = alphabet;
  p["words"] = words;
  p["steps"] = trace;
  return Generated{std::move(p), Json(static_cast<std::int64_t>(step))};
}

std::shared_ptr<const Task> make_word_sorting_task() { return std::make_shared<WordSortingTask>(); }
std::shared_ptr<const Task> make_word_sorting_mistake_task() {
  return std::make_shared<WordSortingMistakeTask>();
}

}  // namespace logicforge::formal
