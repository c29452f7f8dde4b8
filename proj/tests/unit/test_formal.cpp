#include <doctest.h>

#include <algorithm>
#include <map>

#include "logicforge/core/errors.h"
#include "logicforge/core/registry.h"
#include "logicforge/tasks/builtin.h"
#include "logicforge/tasks/formal.h"
#include "oracles.h"

using namespace logicforge;
using namespace logicforge::formal;

namespace {

std::string random_brackets(Rng& rng, int len) {
  const std::string chars = "()[]{}<>";
  std::string s;
  for (int i = 0; i < len; ++i) s += chars[rng.below(chars.size())];
  return s;
}

std::string stack_text(const std::vector<char>& stack) {
  if (stack.empty()) return "empty";
  std::string out;
  for (char c : stack) {
    if (!out.empty()) out += ' ';
    out += c;
  }
  return out;
}

}  // namespace

TEST_CASE("dyck first violation examples") {
  CHECK(dyck_first_violation("(()(") == 5);
  CHECK(dyck_first_violation("((") == 3);
  CHECK(dyck_first_violation(")(") == 1);
  CHECK(dyck_first_violation("([)]") == 3);
  CHECK(dyck_first_violation("<[]>") == 0);
  CHECK(dyck_first_violation("") == 0);
  CHECK(dyck_complete("([{") == "}])");
  CHECK(dyck_complete("()") == "");
  CHECK_FALSE(dyck_complete("(]"));
}

TEST_CASE("dyck scan matches a stack oracle on random strings") {
  Rng rng(31);
  for (int i = 0; i < 10000; ++i) {
    std::string s = random_brackets(rng, rng.uniform_int(0, 12));
    CAPTURE(s);
    CHECK(dyck_first_violation(s) == oracle::dyck_scan(s));
    auto completion = dyck_complete(s);
    std::size_t scan = oracle::dyck_scan(s);
    CHECK(completion.has_value() == (scan == 0 || scan == s.size() + 1));
    if (completion) CHECK(oracle::dyck_scan(s + *completion) == 0);
  }
}

TEST_CASE("dyck samples respect depth and kinds") {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    int length = 2 * rng.uniform_int(1, 10), depth = rng.uniform_int(1, length / 2), kinds = rng.uniform_int(1, 4);
    std::string s = dyck_sample(length, depth, kinds, true, rng);
    CHECK(static_cast<int>(s.size()) == length);
    CHECK(oracle::dyck_scan(s) == 0);
    int cur = 0, best = 0;
    for (char c : s) {
      auto allowed = std::string(kOpeners.substr(0, static_cast<std::size_t>(kinds))) +
                     std::string(kClosers.substr(0, static_cast<std::size_t>(kinds)));
      CHECK(allowed.find(c) != std::string::npos);
      cur += kOpeners.find(c) != std::string::npos ? 1 : -1;
      best = std::max(best, cur);
    }
    CHECK(best == depth);
  }
  CHECK_THROWS_AS(dyck_sample(4, 3, 1, true, rng), ParamError);
}

TEST_CASE("dyck completion instances") {
  const Registry& reg = builtin_registry();
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    auto g = dyck_generate(20, 5, 4, 12, rng);
    std::string prefix = g.payload["prefix"];
    std::string answer = g.answer;
    CHECK(oracle::dyck_scan(prefix + answer) == 0);
    CHECK(verify_answer(reg, "dyck_language", g.payload, g.answer));
    CHECK_FALSE(verify_answer(reg, "dyck_language", g.payload, answer + "()"));
    if (!answer.empty()) {
      CHECK_FALSE(verify_answer(reg, "dyck_language", g.payload, answer.substr(1)));
    }
  }
}

TEST_CASE("dyck error instances agree with a stack replay") {
  const Registry& reg = builtin_registry();
  Rng rng(10);
  for (int i = 0; i < 300; ++i) {
    bool reasoning = i % 2 == 1;
    auto g = dyck_errors_generate(16, 3, 1 + i % 3, reasoning, rng);
    std::string seq = g.payload["sequence"];
    std::int64_t expected = 0;
    if (!reasoning) {
      expected = static_cast<std::int64_t>(oracle::dyck_scan(seq));
      CHECK(expected > 0);
    } else {
      std::vector<char> stack;
      auto steps = g.payload["steps"].get<std::vector<std::string>>();
      REQUIRE(steps.size() == seq.size());
      for (std::size_t k = 0; k < seq.size(); ++k) {
        if (kOpeners.find(seq[k]) != std::string::npos) {
          stack.push_back(seq[k]);
        } else if (!stack.empty()) {
          stack.pop_back();
        }
        if (expected == 0 && steps[k] != stack_text(stack)) expected = static_cast<std::int64_t>(k + 1);
      }
    }
    CHECK(g.answer.get<std::int64_t>() == expected);
    CHECK(verify_answer(reg, "dyck_language_errors", g.payload, expected));
    CHECK_FALSE(verify_answer(reg, "dyck_language_errors", g.payload, expected + 1));
  }
}

TEST_CASE("boolean evaluation matches a recursive oracle at every depth") {
  const Registry& reg = builtin_registry();
  for (int depth = 0; depth <= 6; ++depth) {
    Rng rng(static_cast<std::uint64_t>(100 + depth));
    for (int i = 0; i < 10000; ++i) {
      auto e = boolexpr_random(depth, rng);
      std::string text = to_string(*e);
      CAPTURE(text);
      bool want = oracle::bool_eval(text);
      CHECK(boolexpr_depth(*e) == depth);
      CHECK(boolexpr_eval(*e) == want);
      auto parsed = parse_boolexpr(text);
      REQUIRE(parsed);
      CHECK(boolexpr_eval(**parsed) == want);
      if (i % 50 == 0) {
        Json payload = {{"schema_version", 1}, {"expression", text}, {"depth", depth}};
        CHECK(verify_answer(reg, "boolean_expressions", payload, want));
        CHECK_FALSE(verify_answer(reg, "boolean_expressions", payload, !want));
      }
    }
  }
}

TEST_CASE("boolean parser precedence") {
  auto eval = [](const char* s) { return boolexpr_eval(**parse_boolexpr(s)); };
  CHECK(eval("True or False and False"));
  CHECK_FALSE(eval("not True or False"));
  CHECK(eval("not False and True"));
  CHECK(eval("not not True"));
  CHECK(eval("TRUE AND true"));
  CHECK_FALSE(parse_boolexpr("True and"));
  CHECK_FALSE(parse_boolexpr("( True"));
  CHECK_FALSE(parse_boolexpr("maybe"));
  const Task& t = builtin_registry().task("boolean_expressions");
  Json payload = {{"schema_version", 1}, {"expression", "True"}, {"depth", 0}};
  CHECK(t.parse_answer(payload, "True.") == Json(true));
  CHECK(t.parse_answer(payload, " false ") == Json(false));
  CHECK_FALSE(t.parse_answer(payload, "yes"));
}

TEST_CASE("cipher known vectors") {
  CHECK(cipher_apply({CipherScheme::kCaesar, 3, 0, ""}, "HELLO") == "KHOOR");
  CHECK(cipher_apply({CipherScheme::kCaesar, 3, 0, ""}, "xyz abc") == "ABC DEF");
  CHECK(cipher_apply({CipherScheme::kAtbash, 0, 0, ""}, "ABC") == "ZYX");
  CHECK(cipher_apply({CipherScheme::kVigenere, 0, 0, "AB"}, "AAAA") == "ABAB");
  CHECK(cipher_apply({CipherScheme::kVigenere, 0, 0, "LEMON"}, "ATTACKATDAWN") == "LXFOPVEFRNHR");
  CHECK(cipher_apply({CipherScheme::kRailfence, 0, 3, ""}, "WE ARE DISCOVERED FLEE AT ONCE") ==
        "WECRLTEERDSOEEFEAOCAIVDEN");
  CHECK(cipher_apply({CipherScheme::kKeyword, 0, 0, "KEYWORD"}, "ABC XYZ") == "KEY VXZ");
}

TEST_CASE("cipher round trips for every scheme") {
  Rng rng(3);
  const std::string letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  for (int i = 0; i < 2000; ++i) {
    CipherKey key;
    key.scheme = static_cast<CipherScheme>(i % 5);
    key.shift = rng.uniform_int(0, 25);
    key.rails = rng.uniform_int(2, 6);
    for (int k = rng.uniform_int(1, 6); k > 0; --k) key.keyword += letters[rng.below(26)];
    std::string plain;
    for (int k = rng.uniform_int(1, 30); k > 0; --k) plain += rng.chance(1, 6) ? ' ' : letters[rng.below(26)];
    std::string expected = plain;
    if (key.scheme == CipherScheme::kRailfence) expected.erase(std::remove(expected.begin(), expected.end(), ' '), expected.end());
    CHECK(cipher_decode(key, cipher_apply(key, plain)) == expected);
  }
}

TEST_CASE("cipher instances decode to their answers") {
  const Registry& reg = builtin_registry();
  for (int s = 0; s < 5; ++s) {
    Rng rng(static_cast<std::uint64_t>(s));
    for (int i = 0; i < 40; ++i) {
      auto g = cipher_generate(static_cast<CipherScheme>(s), 16, rng);
      CAPTURE(g.payload.dump());
      CHECK(g.payload["scheme"] == std::string(scheme_name(static_cast<CipherScheme>(s))));
      CHECK(verify_answer(reg, "cipher", g.payload, g.answer));
      std::string lower = g.answer;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](char c) { return static_cast<char>(std::tolower(c)); });
      CHECK(verify_answer(reg, "cipher", g.payload, lower));
      CHECK_FALSE(verify_answer(reg, "cipher", g.payload, lower + "x"));
    }
  }
}

TEST_CASE("word order matches a comparator oracle") {
  Rng rng(12);
  const std::string base = "abcdefghijklmnopqrstuvwxyz";
  for (int i = 0; i < 10000; ++i) {
    std::string alphabet = base;
    rng.shuffle(alphabet);
    auto word = [&] {
      std::string w;
      for (int k = rng.uniform_int(1, 4); k > 0; --k) w += base[rng.below(4)];
      return w;
    };
    std::string a = word(), b = word();
    CHECK(wordsort_less(a, b, alphabet) == oracle::alpha_less(a, b, alphabet));
  }
  for (int i = 0; i < 300; ++i) {
    std::string alphabet = base;
    rng.shuffle(alphabet);
    std::vector<std::string> words;
    for (int k = rng.uniform_int(1, 12); k > 0; --k) {
      std::string w;
      for (int j = rng.uniform_int(1, 5); j > 0; --j) w += base[rng.below(26)];
      words.push_back(w);
    }
    auto expected = words;
    std::stable_sort(expected.begin(), expected.end(),
                     [&](const std::string& x, const std::string& y) { return oracle::alpha_less(x, y, alphabet); });
    CHECK(wordsort_order(words, alphabet) == expected);
  }
  CHECK(wordsort_less("ab", "abc", "abcdefghijklmnopqrstuvwxyz"));
  CHECK(wordsort_less("b", "a", "bacdefghijklmnopqrstuvwxyz"));
}

TEST_CASE("word sorting instances") {
  const Registry& reg = builtin_registry();
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    auto g = wordsort_generate(8, rng);
    std::string alphabet = g.payload["alphabet"];
    auto words = g.payload["words"].get<std::vector<std::string>>();
    std::stable_sort(words.begin(), words.end(),
                     [&](const std::string& x, const std::string& y) { return oracle::alpha_less(x, y, alphabet); });
    CHECK(g.answer == Json(words));
    CHECK(verify_answer(reg, "word_sorting", g.payload, Json(words)));
    if (words.front() != words.back()) {
      std::swap(words.front(), words.back());
      CHECK_FALSE(verify_answer(reg, "word_sorting", g.payload, Json(words)));
    }
  }
}

TEST_CASE("word sorting mistake instances agree with an insertion replay") {
  const Registry& reg = builtin_registry();
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    auto g = wordsort_mistake_generate(rng.uniform_int(3, 10), rng);
    std::string alphabet = g.payload["alphabet"];
    auto words = g.payload["words"].get<std::vector<std::string>>();
    auto steps = g.payload["steps"].get<std::vector<std::vector<std::string>>>();
    REQUIRE(steps.size() == words.size());
    std::int64_t first_wrong = 0;
    int wrong = 0;
    std::vector<std::string> correct;
    for (std::size_t k = 0; k < words.size(); ++k) {
      // Every step is judged against the true insertion-sort state.
      auto pos = std::upper_bound(correct.begin(), correct.end(), words[k],
                                  [&](const std::string& x, const std::string& y) { return oracle::alpha_less(x, y, alphabet); });
      correct.insert(pos, words[k]);
      if (steps[k] != correct) {
        ++wrong;
        if (first_wrong == 0) first_wrong = static_cast<std::int64_t>(k + 1);
      }
    }
    CHECK(wrong == 1);
    CHECK(first_wrong >= 2);
    CHECK(g.answer.get<std::int64_t>() == first_wrong);
    CHECK(verify_answer(reg, "word_sorting_mistake", g.payload, first_wrong));
  }
}

TEST_CASE("formal answer parsing never throws") {
  const Registry& reg = builtin_registry();
  Rng rng(2);
  const std::string chars = "()[]{}<> aZ0129,-.\n";
  for (const char* task : {"dyck_language", "dyck_language_errors", "boolean_expressions", "cipher",
                           "word_sorting", "word_sorting_mistake"}) {
    const Task& t = reg.task(task);
    Instance inst = generate_instance(reg, task, t.schema().resolve(Preset::kHard), 1);
    CHECK(t.verify(inst.payload, *t.parse_answer(inst.payload, t.format_answer(inst.reference_answer))));
    for (int i = 0; i < 2000; ++i) {
      std::string s;
      for (int k = rng.uniform_int(0, 24); k > 0; --k) s += chars[rng.below(chars.size())];
      CHECK_NOTHROW(t.parse_answer(inst.payload, s));
    }
  }
}
