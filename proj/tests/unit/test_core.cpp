#include <doctest.h>

#include <openssl/sha.h>

#include <algorithm>
#include <set>

#include "logicforge/core/errors.h"
#include "logicforge/core/hash.h"
#include "logicforge/core/params.h"
#include "logicforge/core/rational.h"
#include "logicforge/core/registry.h"
#include "logicforge/core/rng.h"
#include "logicforge/tasks/builtin.h"

using namespace logicforge;

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational::of(2, 4) == Rational::of(1, 2));
  CHECK(Rational::of(3, -6) == Rational::of(-1, 2));
  CHECK((Rational::of(1, 3) + Rational::of(1, 6)).str() == "1/2");
  CHECK((Rational(8) / (Rational(3) - Rational(8) / Rational(3))).str() == "24");
  CHECK(Rational::parse("0.25") == Rational::of(1, 4));
  CHECK(Rational::parse("-7/21") == Rational::of(-1, 3));
  CHECK_FALSE(Rational::parse("1/0"));
  CHECK_FALSE(Rational::parse("abc"));
  CHECK_THROWS_AS(Rational::of(1, 0), std::domain_error);
  CHECK_FALSE(checked_div(Rational(1), Rational(0)));
  CHECK_FALSE(checked_mul(Rational(INT64_MAX), Rational(2)));
  CHECK(Rational::of(1, 3) < Rational::of(1, 2));
}

TEST_CASE("rng is a pure function of the seed") {
  Rng a(42), b(42), c(43);
  std::vector<std::uint64_t> xs, ys, zs;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(a.next_u64());
    ys.push_back(b.next_u64());
    zs.push_back(c.next_u64());
  }
  CHECK(xs == ys);
  CHECK(xs != zs);
}

TEST_CASE("rng bounded draws stay in range and cover it") {
  Rng rng(7);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    auto v = rng.range(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  std::vector<int> items{1, 2, 3, 4, 5};
  rng.shuffle(items);
  std::sort(items.begin(), items.end());
  CHECK(items == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("prompt normalization collapses whitespace") {
  CHECK(normalize_prompt("  a \n\t b  ") == "a b");
  CHECK(normalize_prompt("a\r\nb") == "a b");
  CHECK(prompt_id("x  y") == prompt_id(" x y\n"));
  CHECK(prompt_id("x y") != prompt_id("xy"));
}

TEST_CASE("derive_seed matches a direct digest") {
  auto oracle = [](std::uint64_t master, const std::string& task, std::uint64_t index) {
    std::string bytes;
    for (int i = 7; i >= 0; --i) bytes.push_back(static_cast<char>((master >> (8 * i)) & 0xff));
    bytes += task;
    for (int i = 7; i >= 0; --i) bytes.push_back(static_cast<char>((index >> (8 * i)) & 0xff));
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
    std::uint64_t out = 0;
    for (int i = 24; i < 32; ++i) out = (out << 8) | digest[i];
    return out;
  };
  for (std::uint64_t m : {0ULL, 1ULL, 0xdeadbeefULL, ~0ULL}) {
    for (std::uint64_t i : {0ULL, 5ULL, 1ULL << 40}) {
      CHECK(derive_seed(m, "sudoku", i) == oracle(m, "sudoku", i));
    }
  }
  CHECK(derive_seed(1, "a", 0) != derive_seed(1, "b", 0));
}

TEST_CASE("param schema validation") {
  ParamSchema schema({ParamSpec{"n", ParamKind::kInteger, 2, 9, 4, 9, true, "size"},
                      ParamSpec{"p", ParamKind::kRational, 0, 1, Rational::of(1, 2), Rational::of(1, 4),
                                false, "fraction"}});
  auto easy = schema.resolve(Preset::kEasy);
  CHECK(easy.get("n") == Rational(4));
  CHECK(easy.get("p") == Rational::of(1, 2));
  auto custom = schema.resolve(Preset::kHard, {{"n", 5}});
  CHECK(custom.get_int("n") == 5);
  CHECK(custom.entries().front().first == "n");
  CHECK_THROWS_AS(schema.validate({{"n", 4}}), ParamError);
  CHECK_THROWS_AS(schema.validate({{"n", 10}, {"p", 0}}), ParamError);
  CHECK_THROWS_AS(schema.validate({{"n", Rational::of(9, 2)}, {"p", 0}}), ParamError);
  CHECK_THROWS_AS(schema.validate({{"n", 4}, {"p", 0}, {"q", 1}}), ParamError);
  auto round = params_from_json(params_to_json(custom));
  CHECK(round == custom);
}

TEST_CASE("registry rejects bad registrations") {
  Registry reg;
  register_builtin_tasks(reg);
  CHECK(reg.size() == 19);
  CHECK_THROWS_AS(register_builtin_tasks(reg), RegistrationError);
  CHECK_THROWS_AS(reg.at("no_such_task"), UnknownTaskError);
  CHECK_FALSE(is_valid_task_id("Bad-Id"));
  CHECK(is_valid_task_id("game_of_24"));
}

TEST_CASE("easy exclusion flags match the catalog list") {
  const std::set<std::string> expected = {"arrow_maze", "goods_exchange", "kukurasu",
                                          "minesweeper", "norinori", "object_counting",
                                          "space_reasoning_tree", "wordscapes"};
  std::set<std::string> listed(easy_excluded_tasks().begin(), easy_excluded_tasks().end());
  CHECK(listed == expected);
  for (const auto& d : builtin_registry().descriptors()) {
    CHECK(d.easy_excluded == (expected.count(d.id) == 1));
  }
}

TEST_CASE("generate_instance is deterministic and self-consistent") {
  const Registry& reg = builtin_registry();
  for (const auto& d : reg.descriptors()) {
    auto params = d.schema().resolve(Preset::kEasy);
    Instance a = generate_instance(reg, d.id, params, 99);
    Instance b = generate_instance(reg, d.id, params, 99);
    CAPTURE(d.id);
    CHECK(a.prompt == b.prompt);
    CHECK(a.payload == b.payload);
    CHECK(a.id == prompt_id(a.prompt));
    CHECK(a.payload.at("schema_version") == kPayloadSchemaVersion);
    Instance round = instance_from_json(instance_to_json(a));
    CHECK(round.payload == a.payload);
    CHECK(round.reference_answer == a.reference_answer);
    CHECK(verify_answer(reg, d.id, a.payload, a.reference_answer));
  }
}
