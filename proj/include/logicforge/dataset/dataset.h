#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/core/errors.h"
#include "logicforge/core/json.h"
#include "logicforge/core/params.h"
#include "logicforge/core/registry.h"

// Train/validation dataset builds, contamination checks and result stats.
namespace logicforge::dataset {

struct TaskEntry {
  std::string task;
  int count = 0;
  // Preset the overrides apply to; falls back to BuildConfig::preset. With
  // neither, `params` must name every parameter.
  std::optional<Preset> preset;
  DifficultyParams params;
};

// Read from JSON:
// {"master_seed", "preset", "tasks": [{"task", "count", "preset", "params"}],
//  "default_count", "output_dir", "contamination_file", "fail_on_contamination",
//  "duplicate_instruction", "val_per_task", "threads"}
// An empty or missing task list means every registered task the preset allows.
struct BuildConfig {
  std::uint64_t master_seed = 0;
  std::optional<Preset> preset;
  std::vector<TaskEntry> tasks;
  int default_count = 100;
  std::string output_dir;
  std::string contamination_file;
  bool fail_on_contamination = false;
  bool duplicate_instruction = false;
  int val_per_task = 10;
  int threads = 1;
};

// Throws StructuralError on bad shape, ParamError on bad values and
// UnknownTaskError on unregistered tasks.
BuildConfig build_config_from_json(const Registry& registry, const Json& j);

// Resolved per-task parameters, in build order. Enforces the preset rules
// (an easy build cannot name an excluded task) and count >= val_per_task.
struct ResolvedTask {
  std::string task;
  int count = 0;
  DifficultyParams params;
};
std::vector<ResolvedTask> resolve_tasks(const Registry& registry, const BuildConfig& config);

// Everything that determines the output bytes; hashed into the manifest.
// Leaves out output_dir and threads.
Json canonical_config(const Registry& registry, const BuildConfig& config);

struct Record {
  std::string id;  // prompt_id of the templated prompt
  std::string task;
  DifficultyParams difficulty;
  std::string prompt;  // training template plus problem text
  Json answer;         // canonical answer value
  std::uint64_t seed = 0;
  std::string split;   // "train" or "val"
  Json payload;
};

// One JSON object with keys id, task, difficulty, prompt, answer, seed, split,
// schema_version, payload in that order.
Json record_to_json(const Record& record);
std::string record_to_line(const Record& record);

struct Collision {
  std::string record_id;
  std::string task;
  std::string split;
  std::size_t benchmark_line = 0;  // 1-based
  // "prompt" when the full prompt matched, "problem" when the prompt without
  // the training template did.
  std::string matched;
};

Json collision_to_json(const Collision& collision);

// Contamination hit with fail_on_contamination set.
class ContaminationError : public Error {
 public:
  ContaminationError(const std::string& what, std::vector<Collision> collisions)
      : Error(what), collisions_(std::move(collisions)) {}
  const std::vector<Collision>& collisions() const { return collisions_; }

 private:
  std::vector<Collision> collisions_;
};

struct BuildResult {
  std::vector<Record> train;
  std::vector<Record> val;
  std::vector<Collision> collisions;
  Json manifest;
};

// Generates every record in memory. Seeds come from derive_seed(master_seed,
// task, index); an instance whose id was already emitted is replaced by the
// next index. Throws GenerationExhausted when duplicates use up the budget
// and ContaminationError as described above.
BuildResult build_records(const Registry& registry, const BuildConfig& config);

// build_records, then writes train.jsonl, val.jsonl and manifest.json into
// output_dir (created if missing). Throws Error when a file cannot be written.
BuildResult build_dataset(const Registry& registry, const BuildConfig& config);

// The problem text with a leading training instruction removed (one or two
// copies); the input unchanged when it has none.
std::string_view strip_training_template(std::string_view prompt);

// Benchmark prompts from JSONL lines carrying a "prompt" string. Blank lines
// are ignored; any other line without a prompt is an error, so that nothing is
// silently left unchecked. Throws Error when the file cannot be read.
struct BenchmarkPrompt {
  std::size_t line = 0;
  std::string normalized;
};
std::vector<BenchmarkPrompt> load_benchmark(const std::string& path);
std::vector<BenchmarkPrompt> read_benchmark(std::istream& in, const std::string& source);

// Exact match of normalized prompts, for both the full prompt and the problem
// text. Ordered by record, then benchmark line.
std::vector<Collision> contamination_check(std::span<const Record> records,
                                           std::span<const BenchmarkPrompt> benchmark);

// Records read back from a dataset JSONL file (id, task, split and prompt are
// enough). Throws Error on unreadable files or malformed lines.
std::vector<Record> load_records(const std::string& path);

struct StatsRow {
  std::string task;
  int instances = 0;
  int k = 0;
  Rational avg_at_k;
  Rational pass_at_k;  // fraction of instances with at least one success
};

struct Stats {
  std::vector<StatsRow> rows;  // sorted by task
  int skipped = 0;
  std::vector<std::string> warnings;  // one per skipped row
};

// Rows are JSON objects {"id", "task", "rewards": [0/1, ...]}. Malformed rows
// and rows whose k differs from the task's first row are skipped and counted.
Stats compute_stats(std::istream& in);

// Header "task,instances,k,avg_at_k,pass_at_k"; rates as decimals.
std::string stats_csv(const Stats& stats);

}  // namespace logicforge::dataset
