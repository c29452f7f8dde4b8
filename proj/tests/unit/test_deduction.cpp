#include <doctest.h>

#include "logicforge/core/errors.h"
#include "logicforge/core/registry.h"
#include "logicforge/tasks/builtin.h"
#include "logicforge/tasks/deduction.h"

using namespace logicforge;
using namespace logicforge::deduction;

namespace {

// All truth assignments consistent with the anchor and every claim. A claim
// "p_{i-1} tells the truth" made by p_i holds iff p_i is truthful.
std::vector<std::vector<bool>> liar_models(bool anchor, const std::vector<bool>& claims) {
  std::size_t n = claims.size() + 1;
  std::vector<std::vector<bool>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<bool> truth(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = (mask >> i) & 1;
    if (truth[0] != anchor) continue;
    bool ok = true;
    for (std::size_t i = 1; i < n && ok; ++i) {
      bool statement = claims[i - 1] ? truth[i - 1] : !truth[i - 1];
      ok = statement == truth[i];
    }
    if (ok) out.push_back(truth);
  }
  return out;
}

}  // namespace

TEST_CASE("liar propagation examples") {
  // A tells the truth, B says A lies.
  CHECK(liar_propagate(true, {false}) == std::vector<bool>{true, false});
  CHECK(liar_propagate(true, {false, false}) == std::vector<bool>{true, false, true});
  CHECK(liar_propagate(false, {}) == std::vector<bool>{false});
}

TEST_CASE("liar propagation is the unique consistent assignment") {
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    int n = rng.uniform_int(2, 12);
    bool anchor = rng.chance(1, 2);
    std::vector<bool> claims;
    for (int k = 1; k < n; ++k) claims.push_back(rng.chance(1, 2));
    auto models = liar_models(anchor, claims);
    REQUIRE(models.size() == 1);
    auto forward = liar_propagate(anchor, claims);
    CHECK(forward == models[0]);
    auto flipped = liar_propagate(!anchor, claims);
    for (std::size_t k = 0; k < forward.size(); ++k) CHECK(flipped[k] != forward[k]);
  }
}

TEST_CASE("web of lies instances") {
  const Registry& reg = builtin_registry();
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    auto g = weboflies_generate(rng.uniform_int(2, 10), rng);
    auto claims = g.payload["claims"].get<std::vector<bool>>();
    auto models = liar_models(g.payload["anchor"].get<bool>(), claims);
    REQUIRE(models.size() == 1);
    std::size_t q = g.payload["query"];
    std::string expected = models[0][q] ? "yes" : "no";
    CHECK(g.answer == Json(expected));
    CHECK(verify_answer(reg, "web_of_lies", g.payload, expected));
    CHECK_FALSE(verify_answer(reg, "web_of_lies", g.payload, expected == "yes" ? "no" : "yes"));
  }
  CHECK_THROWS_AS(weboflies_generate(1, rng), ParamError);

  const Task& t = reg.task("web_of_lies");
  Json p = weboflies_generate(3, rng).payload;
  CHECK(t.parse_answer(p, "Yes") == Json("yes"));
  CHECK(t.parse_answer(p, " NO. ") == Json("no"));
  CHECK_FALSE(t.parse_answer(p, "maybe"));

  // Query index 0 echoes the anchor.
  p["query"] = 0;
  CHECK(verify_answer(reg, "web_of_lies", p, p["anchor"].get<bool>() ? "yes" : "no"));
}

TEST_CASE("web of lies prompt states the chain") {
  const Registry& reg = builtin_registry();
  Json p = {{"schema_version", kPayloadSchemaVersion},
            {"people", {"Ann", "Ben", "Cy"}},
            {"anchor", true},
            {"claims", {false, true}},
            {"query", 2}};
  CHECK(reg.task("web_of_lies").render(p) ==
        "Question: Ann tells the truth. Ben says Ann lies. Cy says Ben tells the truth. Does Cy tell "
        "the truth?\n\nAnswer yes or no.");
  CHECK(verify_answer(reg, "web_of_lies", p, "no"));
  p["claims"] = Json::array({false});
  CHECK_THROWS_AS(verify_answer(reg, "web_of_lies", p, "no"), StructuralError);
}

TEST_CASE("count words") {
  CHECK(parse_count("3") == 3);
  CHECK(parse_count("three") == 3);
  CHECK(parse_count("Twenty") == 20);
  CHECK(parse_count(" 0 ") == 0);
  CHECK(parse_count("12.") == 12);
  CHECK_FALSE(parse_count("twenty-one"));
  CHECK_FALSE(parse_count("maybe"));
  CHECK_FALSE(parse_count(""));
  CHECK(number_word(11) == "eleven");
  CHECK(number_word(21).empty());
}

TEST_CASE("object counting fixed scenes") {
  const Registry& reg = builtin_registry();
  const auto& cats = categories();
  REQUIRE(cats.size() >= 2);
  const auto& a = cats[0].items.at(0);
  const auto& b = cats[1].items.at(0);
  Json p = {{"schema_version", kPayloadSchemaVersion},
            {"items",
             {{{"name", a.singular}, {"category", cats[0].name}, {"quantity", 3}},
              {{"name", b.singular}, {"category", cats[1].name}, {"quantity", 1}}}},
            {"query", cats[0].name}};
  CHECK(verify_answer(reg, "object_counting", p, 3));
  CHECK_FALSE(verify_answer(reg, "object_counting", p, 4));
  p["query"] = cats[1].name;
  CHECK(verify_answer(reg, "object_counting", p, 1));
  const Task& t = reg.task("object_counting");
  CHECK(t.parse_answer(p, "one") == Json(1));
  CHECK_FALSE(t.parse_answer(p, "a few"));
  p["items"][0]["name"] = "unobtainium";
  CHECK_THROWS_AS(verify_answer(reg, "object_counting", p, 1), StructuralError);
}

TEST_CASE("object counting answers match a filter-and-sum oracle and scenes round trip") {
  const Registry& reg = builtin_registry();
  Rng rng(15);
  for (int i = 0; i < 1000; ++i) {
    int cats = rng.uniform_int(2, 4);
    auto g = object_counting_generate(rng.uniform_int(1, 10), cats, rng.uniform_int(1, 10), rng);
    std::string query = g.payload["query"];
    std::int64_t total = 0;
    bool present = false;
    std::vector<SceneItem> items;
    std::vector<std::pair<std::string, int>> expected;
    for (const auto& item : g.payload["items"]) {
      if (item["category"] == query) {
        total += item["quantity"].get<std::int64_t>();
        present = true;
      }
      items.push_back(SceneItem{item["name"], item["category"], item["quantity"]});
      expected.emplace_back(item["name"], item["quantity"]);
    }
    CHECK(present);
    CHECK(g.answer == Json(total));
    CHECK(verify_answer(reg, "object_counting", g.payload, total));
    CHECK_FALSE(verify_answer(reg, "object_counting", g.payload, total + 1));

    std::string text = render_scene(items);
    CAPTURE(text);
    auto parsed = parse_scene(text);
    REQUIRE(parsed);
    CHECK(*parsed == expected);
    CHECK(reg.task("object_counting").render(g.payload).starts_with(text));
  }
}

TEST_CASE("object counting parameter errors") {
  Rng rng(1);
  CHECK_THROWS_AS(object_counting_generate(3, 1, 3, rng), ParamError);
  CHECK_THROWS_AS(object_counting_generate(0, 2, 3, rng), ParamError);
  CHECK_THROWS_AS(object_counting_generate(3, 2, 0, rng), ParamError);
}
