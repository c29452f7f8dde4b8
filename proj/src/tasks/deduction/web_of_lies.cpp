#include "../task_base.h"
#include "logicforge/tasks/deduction.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::deduction {
namespace {

constexpr std::string_view kNames[] = {
    "Alice", "Bob",    "Carla", "Dmitri", "Elena",  "Farid", "Greta", "Hiro",   "Ines",  "Jamal",
    "Kofi",  "Lena",   "Mateo", "Nadia",  "Oscar",  "Priya", "Quinn", "Rosa",   "Sven",  "Tariq",
    "Uma",   "Viktor", "Wanda", "Ximena", "Yusuf",  "Zara"};
constexpr int kMaxPeople = static_cast<int>(std::size(kNames));

struct Chain {
  std::vector<std::string> people;
  bool anchor;
  std::vector<bool> claims;
  std::size_t query;
};

Chain read_chain(const Json& payload) {
  Chain c;
  for (const auto& v : payload::require_array(payload, "people", 2, static_cast<std::size_t>(kMaxPeople))) {
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw StructuralError("web_of_lies: people must be non-empty names");
    }
    c.people.push_back(v.get<std::string>());
  }
  c.anchor = payload::require_bool(payload, "anchor");
  const Json& claims = payload::require_array(payload, "claims", c.people.size() - 1, c.people.size() - 1);
  for (const auto& v : claims) {
    if (!v.is_boolean()) throw StructuralError("web_of_lies: claims must be booleans");
    c.claims.push_back(v.get<bool>());
  }
  c.query = static_cast<std::size_t>(
      payload::require_int(payload, "query", 0, static_cast<std::int64_t>(c.people.size()) - 1));
  return c;
}

std::string answer_word(const Json& answer) {
  if (!answer.is_string()) throw StructuralError("web_of_lies: answer must be a string");
  return payload::to_lower(payload::trim(answer.get<std::string>()));
}

class WebOfLiesTask : public tasks::TaskBase {
 public:
  WebOfLiesTask()
      : TaskBase("web_of_lies", {tasks::int_param("num_people", 2, kMaxPeople, 4, 8,
                                                  "people in the chain")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return weboflies_generate(params.get_small("num_people"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_chain(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto c = read_chain(payload);
    bool truth = liar_propagate(c.anchor, c.claims)[c.query];
    return answer_word(answer) == (truth ? "yes" : "no");
  }

  // "yes" or "no", case-insensitive, with an optional final period.
  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    text = payload::trim(text);
    if (!text.empty() && text.back() == '.') text.remove_suffix(1);
    auto word = payload::to_lower(text);
    if (word != "yes" && word != "no") return std::nullopt;
    return Json(word);
  }

  std::string format_answer(const Json& answer) const override { return answer_word(answer); }

  std::string render(const Json& payload) const override {
    auto c = read_chain(payload);
    std::string out = "Question: " + c.people[0] + (c.anchor ? " tells the truth." : " lies.");
    for (std::size_t i = 1; i < c.people.size(); ++i) {
      out += " " + c.people[i] + " says " + c.people[i - 1] +
             (c.claims[i - 1] ? " tells the truth." : " lies.");
    }
    out += " Does " + c.people[c.query] + " tell the truth?\n\nAnswer yes or no.";
    return out;
  }
};

}  // namespace

std::vector<bool> liar_propagate(bool anchor, const std::vector<bool>& claims_truthful) {
  std::vector<bool> out{anchor};
  // A truthful speaker's claim holds; a liar's claim is false.
  for (bool claim : claims_truthful) out.push_back(out.back() == claim);
  return out;
}

Generated weboflies_generate(int num_people, Rng& rng) {
  if (num_people < 2 || num_people > kMaxPeople) {
    throw ParamError("web_of_lies: num_people must be in [2, " + std::to_string(kMaxPeople) + "]");
  }
  std::vector<std::string> names(std::begin(kNames), std::end(kNames));
  rng.shuffle(names);
  names.resize(static_cast<std::size_t>(num_people));
  bool anchor = rng.chance(1, 2);
  std::vector<bool> claims;
  for (int i = 1; i < num_people; ++i) claims.push_back(rng.chance(1, 2));
  auto query = static_cast<std::size_t>(num_people - 1);

  Json p = payload::new_payload();
  p["people"] = names;
  p["anchor"] = anchor;
  p["claims"] = claims;
  p["query"] = query;
  bool truth = liar_propagate(anchor, claims)[query];
  return Generated{std::move(p), Json(truth ? "yes" : "no")};
}

std::shared_ptr<const Task> make_web_of_lies_task() { return std::make_shared<WebOfLiesTask>(); }

}  // namespace logicforge::deduction
