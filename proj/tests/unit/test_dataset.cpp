#include <doctest.h>

#include <openssl/sha.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "logicforge/core/errors.h"
#include "logicforge/core/hash.h"
#include "logicforge/core/registry.h"
#include "logicforge/dataset/dataset.h"
#include "logicforge/protocol/protocol.h"
#include "logicforge/tasks/builtin.h"

using namespace logicforge;
using namespace logicforge::dataset;
namespace fs = std::filesystem;

namespace {

const Registry& reg() { return builtin_registry(); }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("logicforge_test_dataset_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string hex_sha256(const std::string& bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

std::string squeeze(const std::string& s) {
  std::istringstream in(s);
  std::string word, out;
  while (in >> word) out += (out.empty() ? "" : " ") + word;
  return out;
}

BuildConfig two_task_config() {
  return build_config_from_json(reg(), Json{{"master_seed", 17},
                                            {"preset", "easy"},
                                            {"tasks", {{{"task", "web_of_lies"}, {"count", 12}},
                                                       {{"task", "word_sorting"}, {"count", 12}}}}});
}

}  // namespace

TEST_CASE("split sizes and record invariants") {
  auto r = build_records(reg(), two_task_config());
  CHECK(r.train.size() == 4);
  CHECK(r.val.size() == 20);
  std::map<std::string, int> val_per_task, train_per_task;
  std::set<std::string> ids;
  for (const auto* part : {&r.train, &r.val}) {
    for (const auto& rec : *part) {
      CHECK(ids.insert(rec.id).second);
      (rec.split == "val" ? val_per_task : train_per_task)[rec.task]++;
      CHECK(rec.split == (part == &r.val ? "val" : "train"));
      CHECK(rec.id == hex_sha256(squeeze(rec.prompt)));
      CHECK(rec.prompt.starts_with(std::string(protocol::training_instruction()) + "\n\n"));
      CHECK(verify_answer(reg(), rec.task, rec.payload, rec.answer));
    }
  }
  CHECK(val_per_task == std::map<std::string, int>{{"web_of_lies", 10}, {"word_sorting", 10}});
  CHECK(train_per_task == std::map<std::string, int>{{"web_of_lies", 2}, {"word_sorting", 2}});

  Json j = record_to_json(r.val.front());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"id", "task", "difficulty", "prompt", "answer", "seed", "split",
                                         "schema_version", "payload"});
  CHECK(record_to_line(r.val.front()) == j.dump());
}

TEST_CASE("seeds follow derive_seed and replace duplicates in order") {
  // A 2x2 sudoku with one blank has 2 grids x 4 cells = 8 distinct prompts.
  auto config_for = [](int count) {
    return build_config_from_json(reg(), Json{{"master_seed", 3},
                                              {"tasks", {{{"task", "sudoku"},
                                                          {"count", count},
                                                          {"params", {{"n", 2}, {"empties", 1}}}}}},
                                              {"val_per_task", 2}});
  };
  auto r = build_records(reg(), config_for(8));
  std::vector<Record> all = r.train;
  all.insert(all.end(), r.val.begin(), r.val.end());
  REQUIRE(all.size() == 8);
  // Oracle: walk indices in order, keep the first instance of each id.
  std::set<std::string> seen;
  std::vector<std::uint64_t> expected;
  DifficultyParams params{{"n", Rational(2)}, {"empties", Rational(1)}};
  int replaced = 0;
  for (std::uint64_t i = 0; expected.size() < 8; ++i) {
    std::uint64_t seed = derive_seed(3, "sudoku", i);
    Instance inst = generate_instance(reg(), "sudoku", params, seed);
    if (seen.insert(hex_sha256(squeeze(protocol::render_training_prompt(inst.prompt)))).second) {
      expected.push_back(seed);
    } else {
      ++replaced;
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].seed == expected[i]);
  CHECK(replaced > 0);
  CHECK(r.manifest["tasks"][0]["duplicates_replaced"] == replaced);
  CHECK_THROWS_AS(build_records(reg(), config_for(9)), GenerationExhausted);
}

TEST_CASE("rebuilds are byte-identical across thread counts") {
  auto cfg = two_task_config();
  fs::path first = scratch("a");
  cfg.output_dir = first.string();
  build_dataset(reg(), cfg);
  cfg.output_dir = scratch("b").string();
  cfg.threads = 3;
  build_dataset(reg(), cfg);
  for (const char* f : {"train.jsonl", "val.jsonl", "manifest.json"}) {
    CAPTURE(f);
    std::string a = slurp(first / f);
    std::string b = slurp(fs::path(cfg.output_dir) / f);
    CHECK(!a.empty());
    CHECK(a == b);
  }
  std::string train = slurp(fs::path(cfg.output_dir) / "train.jsonl");
  CHECK(std::count(train.begin(), train.end(), '\n') == 4);
  CHECK(train.find('\r') == std::string::npos);

  Json manifest = Json::parse(slurp(fs::path(cfg.output_dir) / "manifest.json"));
  CHECK(manifest["config_sha256"] == hex_sha256(canonical_config(reg(), cfg).dump()));
  CHECK(manifest["files"]["train.jsonl"]["sha256"] == hex_sha256(train));
  CHECK(manifest["files"]["val.jsonl"]["records"] == 20);
}

TEST_CASE("easy preset over the whole registry") {
  const std::set<std::string> excluded = {"arrow_maze", "goods_exchange", "kukurasu", "minesweeper",
                                          "norinori", "object_counting", "space_reasoning_tree", "wordscapes"};
  auto cfg = build_config_from_json(reg(), Json{{"master_seed", 1}, {"preset", "easy"}, {"default_count", 10}});
  auto tasks = resolve_tasks(reg(), cfg);
  std::set<std::string> got, expected;
  for (const auto& t : tasks) got.insert(t.task);
  for (const auto& id : reg().list()) {
    if (!excluded.count(id)) expected.insert(id);
  }
  CHECK(got == expected);
  CHECK(got.size() + 2 == reg().size());  // minesweeper and object_counting are registered

  auto hard = build_config_from_json(reg(), Json{{"master_seed", 1}, {"preset", "hard"}, {"default_count", 10}});
  CHECK(resolve_tasks(reg(), hard).size() == reg().size());

  CHECK_THROWS_AS(
      build_config_from_json(reg(), Json{{"preset", "easy"}, {"tasks", {{{"task", "minesweeper"}, {"count", 10}}}}}),
      ParamError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(build_config_from_json(reg(), Json{{"tasks", {{{"task", "nope"}, {"count", 10}}}}}),
                  UnknownTaskError);
  CHECK_THROWS_AS(build_config_from_json(reg(), Json{{"preset", "easy"}, {"colour", "red"}}), StructuralError);
  CHECK_THROWS_AS(
      build_config_from_json(reg(), Json{{"preset", "easy"}, {"tasks", {{{"task", "web_of_lies"}, {"count", 5}}}}}),
      ParamError);
  // The same rules hold for configs assembled in code.
  BuildConfig few;
  few.preset = Preset::kEasy;
  few.tasks.push_back(TaskEntry{"web_of_lies", 5, std::nullopt, {}});
  CHECK_THROWS_AS(resolve_tasks(reg(), few), ParamError);
  few.tasks[0] = TaskEntry{"minesweeper", 10, std::nullopt, {}};
  CHECK_THROWS_AS(resolve_tasks(reg(), few), ParamError);
}

TEST_CASE("contamination check") {
  auto r = build_records(reg(), two_task_config());
  const Record& planted = r.val[3];
  const Record& problem_only = r.train[1];
  std::string spaced = planted.prompt;
  for (std::size_t pos = 0; (pos = spaced.find(' ', pos)) != std::string::npos; pos += 3) spaced.replace(pos, 1, " \t ");
  std::ostringstream bench;
  bench << Json{{"prompt", "What is the capital of France?"}}.dump() << "\n\n";
  bench << Json{{"prompt", spaced}, {"source", "x"}}.dump() << "\n";
  bench << Json{{"prompt", std::string(strip_training_template(problem_only.prompt))}}.dump() << "\n";
  std::istringstream in(bench.str());
  auto prompts = read_benchmark(in, "bench");
  REQUIRE(prompts.size() == 3);
  CHECK(prompts[1].line == 3);

  std::vector<Record> all = r.train;
  all.insert(all.end(), r.val.begin(), r.val.end());
  auto hits = contamination_check(all, prompts);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].record_id == problem_only.id);
  CHECK(hits[0].matched == "problem");
  CHECK(hits[0].benchmark_line == 4);
  CHECK(hits[1].record_id == planted.id);
  CHECK(hits[1].matched == "prompt");
  CHECK(hits[1].split == "val");

  std::istringstream clean(Json{{"prompt", "unrelated"}}.dump());
  CHECK(contamination_check(all, read_benchmark(clean, "clean")).empty());

  std::istringstream broken("{\"question\": \"x\"}\n");
  CHECK_THROWS_AS(read_benchmark(broken, "broken"), Error);
  CHECK_THROWS_AS(load_benchmark("/nonexistent/bench.jsonl"), Error);

  fs::path dir = scratch("contam");
  std::ofstream(dir / "bench.jsonl") << bench.str();
  auto cfg = two_task_config();
  cfg.contamination_file = (dir / "bench.jsonl").string();
  auto flagged = build_records(reg(), cfg);
  CHECK(flagged.collisions.size() == 2);
  cfg.fail_on_contamination = true;
  try {
    build_records(reg(), cfg);
    FAIL("expected ContaminationError");
  } catch (const ContaminationError& e) {
    CHECK(e.collisions().size() == 2);
  }
}

TEST_CASE("template stripping") {
  std::string instr(protocol::training_instruction());
  CHECK(strip_training_template(instr + "\n\nP") == "P");
  CHECK(strip_training_template(instr + "\n\n" + instr + "\n\nP") == "P");
  CHECK(strip_training_template("P") == "P");
}

TEST_CASE("stats") {
  auto run = [](const std::string& text) {
    std::istringstream in(text);
    return compute_stats(in);
  };
  auto s = run("{\"id\":\"a\",\"task\":\"t\",\"rewards\":[1,0]}\n{\"id\":\"b\",\"task\":\"t\",\"rewards\":[0,0]}\n");
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].avg_at_k == Rational::of(1, 4));
  CHECK(s.rows[0].pass_at_k == Rational::of(1, 2));
  CHECK(s.rows[0].k == 2);
  CHECK(stats_csv(s) == "task,instances,k,avg_at_k,pass_at_k\nt,2,2,0.25,0.5\n");

  s = run("");
  CHECK(s.rows.empty());
  CHECK(s.skipped == 0);
  CHECK(stats_csv(s) == "task,instances,k,avg_at_k,pass_at_k\n");

  s = run("{\"id\":\"a\",\"task\":\"z\",\"rewards\":[1]}\n"
          "{\"id\":\"b\",\"task\":\"m\",\"rewards\":[0,1,1]}\n"
          "not json\n"
          "{\"id\":\"c\",\"task\":\"m\",\"rewards\":[1]}\n"
          "{\"id\":\"d\",\"task\":\"m\",\"rewards\":[2,0,0]}\n");
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].task == "m");
  CHECK(s.rows[0].avg_at_k == Rational::of(2, 3));
  CHECK(s.rows[1].task == "z");
  CHECK(s.skipped == 3);
  CHECK(s.warnings.size() == 3);
}

TEST_CASE("records read back from disk") {
  auto cfg = two_task_config();
  cfg.output_dir = scratch("load").string();
  auto r = build_dataset(reg(), cfg);
  auto loaded = load_records((fs::path(cfg.output_dir) / "val.jsonl").string());
  REQUIRE(loaded.size() == r.val.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].id == r.val[i].id);
    CHECK(loaded[i].prompt == r.val[i].prompt);
  }
}
