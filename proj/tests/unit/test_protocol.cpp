#include <doctest.h>

#include <regex>
#include <stdexcept>

#include "logicforge/core/errors.h"
#include "logicforge/core/registry.h"
#include "logicforge/protocol/protocol.h"
#include "logicforge/protocol/scoring.h"
#include "logicforge/tasks/builtin.h"

using namespace logicforge;
using namespace logicforge::protocol;

namespace {

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n\r\f\v");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\n\r\f\v");
  return s.substr(b, e - b + 1);
}

// Contents of every open/close pair with no repeated opening tag inside.
std::vector<std::string> regex_pairs(const std::string& text, const std::string& tag) {
  std::regex re("<" + tag + ">((?:(?!<" + tag + ">)[\\s\\S])*?)</" + tag + ">");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[1].str());
  }
  return out;
}

std::string random_response(Rng& rng) {
  static const std::vector<std::string> pieces = {"<think>", "</think>", "<answer>", "</answer>",
                                                  "<Answer>", "x", " 7 ", "\n", "<", ">", "/", "answer"};
  std::string s;
  for (int n = rng.uniform_int(0, 10); n > 0; --n) s += rng.pick(pieces);
  return s;
}

Json lies_payload() {
  return Json{{"schema_version", kPayloadSchemaVersion},
              {"people", {"Ann", "Ben"}},
              {"anchor", true},
              {"claims", {false}},
              {"query", 1}};
}

}  // namespace

TEST_CASE("format examples") {
  auto p = check_format("<think>x</think><answer> 7 </answer>");
  CHECK(p.format_ok);
  CHECK(p.answer_text == "7");
  CHECK_FALSE(check_format("<answer>7</answer>").format_ok);
  CHECK_FALSE(check_format("<answer>7</answer>").answer_text);
  CHECK(check_format("<think>a</think><answer>1</answer><answer>2</answer>").answer_text == "2");
  CHECK_FALSE(check_format("<think>a</think><Answer>1</Answer>").format_ok);
  CHECK_FALSE(check_format("<think>a<answer>1</answer>").format_ok);
  CHECK(check_format("<answer>1</answer><think></think>").format_ok);
  CHECK(last_answer("<answer> 5</answer>") == "5");
}

TEST_CASE("format check agrees with a regex oracle on random tag soup") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    std::string s = random_response(rng);
    CAPTURE(s);
    auto think = regex_pairs(s, "think");
    auto answer = regex_pairs(s, "answer");
    bool ok = !think.empty() && !answer.empty();
    auto p = check_format(s);
    CHECK(p.format_ok == ok);
    if (ok) {
      CHECK(p.answer_text == trimmed(answer.back()));
    } else {
      CHECK_FALSE(p.answer_text);
    }
  }
}

TEST_CASE("format check never throws on arbitrary bytes") {
  Rng rng(8);
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    for (int n = rng.uniform_int(0, 40); n > 0; --n) s += static_cast<char>(rng.below(256));
    CHECK_NOTHROW(check_format(s));
  }
}

TEST_CASE("reward truth table") {
  const Registry& reg = builtin_registry();
  Json p = lies_payload();  // Ben lies, so the answer is "no"
  struct Row {
    std::string response;
    bool format_ok, correct;
    int reward;
  };
  const Row rows[] = {
      {"<think>Ben contradicts Ann.</think> <answer>no</answer>", true, true, 1},
      {"<think>guess</think><answer>yes</answer>", true, false, 0},
      {"<answer>no</answer>", false, true, 0},
      {"<answer>yes</answer>", false, false, 0},
  };
  for (const auto& row : rows) {
    CAPTURE(row.response);
    auto v = compute_reward(reg, "web_of_lies", p, row.response);
    CHECK(v.format_ok == row.format_ok);
    CHECK(v.correct == row.correct);
    CHECK(v.reward == row.reward);
    CHECK(binary_reward(row.format_ok, row.correct) == row.reward);
  }
  CHECK(compute_reward(reg, "web_of_lies", p, "no tags at all").reward == 0);
  CHECK(compute_reward(reg, "web_of_lies", p, "<think></think><answer>perhaps</answer>").reward == 0);
  CHECK_THROWS_AS(compute_reward(reg, "no_such_task", p, "x"), UnknownTaskError);
  auto broken = compute_reward(reg, "web_of_lies", Json{{"people", 3}}, "<think></think><answer>no</answer>");
  CHECK(broken.reward == 0);
  CHECK_FALSE(broken.detail.empty());
}

TEST_CASE("reward invariant over generated instances") {
  const Registry& reg = builtin_registry();
  for (const auto& d : reg.descriptors()) {
    CAPTURE(d.id);
    Instance inst = generate_instance(reg, d.id, d.schema().resolve(Preset::kEasy), 11);
    std::string ans = d.task->format_answer(inst.reference_answer);
    CHECK(compute_reward(reg, d.id, inst.payload, "<think>t</think><answer>" + ans + "</answer>").reward == 1);
    CHECK(compute_reward(reg, d.id, inst.payload, "<answer>" + ans + "</answer>").reward == 0);
    CHECK(compute_reward(reg, d.id, inst.payload, ans).reward == 0);
  }
}

TEST_CASE("avg and pass at k") {
  std::vector<int> one{1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(avg_at_k(one) == Rational::of(1, 8));
  CHECK(pass_at_k(one) == 1);
  CHECK(avg_at_k(std::vector<int>(8, 0)) == Rational::of(0, 1));
  CHECK(avg_at_k(std::vector<int>(8, 1)) == Rational::of(1, 1));
  CHECK(pass_at_k(std::vector<int>{0, 0, 0}) == 0);
  CHECK_THROWS_AS(avg_at_k(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(pass_at_k(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(avg_at_k(std::vector<int>{2}), std::invalid_argument);

  Rng rng(10);
  for (int i = 0; i < 10000; ++i) {
    std::vector<int> r(static_cast<std::size_t>(rng.uniform_int(1, 16)));
    int hits = 0;
    for (auto& x : r) hits += x = rng.chance(1, 3) ? 1 : 0;
    Rational avg = avg_at_k(r);
    CHECK(avg == Rational::of(hits, static_cast<std::int64_t>(r.size())));
    CHECK(pass_at_k(r) == (hits > 0 ? 1 : 0));
    CHECK(avg.to_double() <= pass_at_k(r));
  }
}

TEST_CASE("reflection ratio") {
  CHECK(reflection_ratio(std::vector<std::string>{"let me RECHECK the grid", "done"}) == Rational::of(1, 2));
  CHECK(reflection_ratio(std::vector<std::string>{"plain text"}) == Rational::of(0, 1));
  CHECK(reflection_ratio(std::vector<std::string>{"try again", "check again"}) == Rational::of(1, 1));
  CHECK(reflection_phrases().size() == 7);
  for (auto phrase : {"rethink", "let's correct it", "re-evaluate", "think again"}) {
    CHECK(has_reflection(std::string("So, ") + phrase + "."));
  }
  CHECK_FALSE(has_reflection("re evaluate; checking again"));
  CHECK_THROWS_AS(reflection_ratio(std::vector<std::string>{}), std::invalid_argument);
}

TEST_CASE("training prompt template") {
  const std::string instruction =
      "Solve the following problem step by step. First, think about the reasoning process in the mind "
      "and then provide the answer. The reasoning process is enclosed within <think> </think> and the "
      "final answer is enclosed within <answer> </answer> tags, respectively, i.e., <think> reasoning "
      "process here </think> <answer> answer here</answer>.";
  CHECK(training_instruction() == instruction);
  CHECK(render_training_prompt("") == instruction + "\n\n");
  std::string prompt = render_training_prompt("What is 2+2?");
  CHECK(prompt.ends_with("What is 2+2?"));
  CHECK(prompt.find("<think> reasoning process here </think>") != std::string::npos);
  CHECK(render_training_prompt("P", {true}) == instruction + "\n\n" + instruction + "\n\nP");
  CHECK(render_training_prompt("a") != render_training_prompt("b"));
}

TEST_CASE("string scoring surface") {
  std::string payload = lies_payload().dump();
  std::string record = Json{{"id", "x"}, {"task", "web_of_lies"}, {"schema_version", 1}, {"payload", lies_payload()}}.dump();
  CHECK(scoring::score_response("web_of_lies", payload, "<think>t</think><answer>No</answer>") == 1);
  CHECK(scoring::score_response("web_of_lies", record, "<think>t</think><answer>no</answer>") == 1);
  CHECK(scoring::score_response("web_of_lies", payload, "no") == 0);
  CHECK(scoring::score_response("web_of_lies", payload, "<think>t</think><answer>yes</answer>") == 0);
  CHECK_THROWS_AS(scoring::score_response("nope", payload, "x"), UnknownTaskError);
  CHECK_THROWS_AS(scoring::score_response("web_of_lies", "{not json", "x"), StructuralError);
  CHECK_THROWS_AS(scoring::score_response("web_of_lies", "{\"people\": 1}", "x"), StructuralError);

  CHECK(scoring::extract_answer("<think>t</think><answer>A</answer>") == "A");
  CHECK_FALSE(scoring::extract_answer("A"));
  CHECK(scoring::extract_answer("<think>t</think><answer>A</answer><answer>B</answer>") == "B");

  std::vector<scoring::BatchItem> mixed = {
      {"web_of_lies", payload, "<think>t</think><answer>no</answer>"},
      {"web_of_lies", payload, "<answer>no</answer>"},
      {"web_of_lies", payload, "<think>t</think><answer>yes</answer>"}};
  CHECK(scoring::score_batch(mixed) == std::vector<int>{1, 0, 0});
  CHECK_THROWS_AS(scoring::score_batch({}), std::invalid_argument);
  mixed.push_back({"web_of_lies", "[]", "x"});
  try {
    scoring::score_batch(mixed);
    FAIL("expected BatchError");
  } catch (const scoring::BatchError& e) {
    CHECK(e.index() == 3);
  }
}

TEST_CASE("batch scoring equals single calls") {
  const Registry& reg = builtin_registry();
  Rng rng(21);
  std::vector<Instance> pool;
  for (const auto& d : reg.descriptors()) {
    pool.push_back(generate_instance(reg, d.id, d.schema().resolve(Preset::kEasy), 5));
  }
  std::vector<scoring::BatchItem> items;
  for (int i = 0; i < 1000; ++i) {
    const Instance& inst = rng.pick(pool);
    std::string ans = reg.task(inst.task).format_answer(inst.reference_answer);
    std::string response;
    switch (rng.below(4)) {
      case 0: response = "<think>t</think><answer>" + ans + "</answer>"; break;
      case 1: response = "<answer>" + ans + "</answer>"; break;
      case 2: response = "<think>t</think><answer>" + ans + "x</answer>"; break;
      default: response = random_response(rng);
    }
    items.push_back({inst.task, instance_to_json(inst).dump(), response});
  }
  auto batch = scoring::score_batch(items);
  REQUIRE(batch.size() == items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(batch[i] == scoring::score_response(items[i].task, items[i].instance_json, items[i].response));
    Json payload = scoring::instance_payload(Json::parse(items[i].instance_json));
    CHECK(batch[i] == compute_reward(reg, items[i].task, payload, items[i].response).reward);
  }
}
