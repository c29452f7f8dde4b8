#include "logicforge/dataset/dataset.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "logicforge/core/hash.h"
#include "logicforge/protocol/protocol.h"
#include "logicforge/version.h"

namespace logicforge::dataset {
namespace {

// Extra indices a task may consume to replace duplicates.
int dedup_budget(int count) { return std::max(1000, 2 * count); }

int read_int(const Json& j, const char* key, int fallback, int min, int max) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw StructuralError(std::string("config: '") + key + "' must be an integer");
  auto x = v.get<std::int64_t>();
  if (x < min || x > max) {
    throw ParamError(std::string("config: '") + key + "' must be in [" + std::to_string(min) + ", " +
                     std::to_string(max) + "]");
  }
  return static_cast<int>(x);
}

bool read_bool(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw StructuralError(std::string("config: '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::string read_string(const Json& j, const char* key) {
  if (!j.contains(key)) return "";
  if (!j.at(key).is_string()) throw StructuralError(std::string("config: '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::optional<Preset> read_preset(const Json& j) {
  if (!j.contains("preset") || j.at("preset").is_null()) return std::nullopt;
  if (!j.at("preset").is_string()) throw StructuralError("config: 'preset' must be a string");
  auto p = parse_preset(j.at("preset").get<std::string>());
  if (!p) throw ParamError("config: unknown preset '" + j.at("preset").get<std::string>() + "'");
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

std::string jsonl(const std::vector<Record>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_line(r);
    out += '\n';
  }
  return out;
}

// Instances for indices [first, first + n), in index order.
std::vector<Instance> generate_block(const Registry& registry, const ResolvedTask& task,
                                     std::uint64_t master_seed, std::uint64_t first, int n,
                                     int threads) {
  std::vector<std::optional<Instance>> slots(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        std::uint64_t seed = derive_seed(master_seed, task.task, first + static_cast<std::uint64_t>(i));
        slots[static_cast<std::size_t>(i)] = generate_instance(registry, task.task, task.params, seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  int workers = std::clamp(threads, 1, std::max(1, n));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<Instance> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string decimal(const Rational& r) {
  std::ostringstream out;
  out << std::setprecision(6) << r.to_double();
  return out.str();
}

}  // namespace

BuildConfig build_config_from_json(const Registry& registry, const Json& j) {
  if (!j.is_object()) throw StructuralError("config: expected a JSON object");
  static const std::set<std::string> known = {
      "master_seed",  "preset",        "tasks",           "default_count",
      "output_dir",   "contamination_file", "fail_on_contamination", "duplicate_instruction",
      "val_per_task", "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw StructuralError("config: unknown field '" + key + "'");
  }
  BuildConfig c;
  if (j.contains("master_seed")) {
    const Json& s = j.at("master_seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw StructuralError("config: 'master_seed' must be a non-negative integer");
    }
    c.master_seed = s.get<std::uint64_t>();
  }
  c.preset = read_preset(j);
  c.default_count = read_int(j, "default_count", c.default_count, 1, 10'000'000);
  c.val_per_task = read_int(j, "val_per_task", c.val_per_task, 0, 10'000'000);
  c.threads = read_int(j, "threads", c.threads, 1, 256);
  c.output_dir = read_string(j, "output_dir");
  c.contamination_file = read_string(j, "contamination_file");
  c.fail_on_contamination = read_bool(j, "fail_on_contamination", false);
  c.duplicate_instruction = read_bool(j, "duplicate_instruction", false);
  if (j.contains("tasks")) {
    if (!j.at("tasks").is_array()) throw StructuralError("config: 'tasks' must be an array");
    for (const auto& t : j.at("tasks")) {
      if (!t.is_object() || !t.contains("task") || !t.at("task").is_string()) {
        throw StructuralError("config: every task entry needs a 'task' string");
      }
      TaskEntry e;
      e.task = t.at("task").get<std::string>();
      registry.at(e.task);
      e.count = read_int(t, "count", c.default_count, 1, 10'000'000);
      e.preset = read_preset(t);
      if (t.contains("params")) e.params = params_from_json(t.at("params"));
      c.tasks.push_back(std::move(e));
    }
  }
  resolve_tasks(registry, c);
  return c;
}

std::vector<ResolvedTask> resolve_tasks(const Registry& registry, const BuildConfig& config) {
  std::vector<TaskEntry> entries = config.tasks;
  if (entries.empty()) {
    if (!config.preset) throw ParamError("config: list the tasks or choose a preset");
    for (const auto& d : registry.descriptors()) {
      if (*config.preset == Preset::kEasy && d.easy_excluded) continue;
      entries.push_back(TaskEntry{d.id, config.default_count, std::nullopt, {}});
    }
  }
  std::vector<ResolvedTask> out;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    const TaskDescriptor& d = registry.at(e.task);
    if (!seen.insert(e.task).second) throw ParamError("config: task '" + e.task + "' listed twice");
    auto preset = e.preset ? e.preset : config.preset;
    if ((config.preset == Preset::kEasy || e.preset == Preset::kEasy) && d.easy_excluded) {
      throw ParamError("config: task '" + e.task + "' is excluded from the easy preset");
    }
    if (e.count < config.val_per_task) {
      throw ParamError("config: task '" + e.task + "' count " + std::to_string(e.count) +
                       " is below val_per_task " + std::to_string(config.val_per_task));
    }
    DifficultyParams params = preset ? d.schema().resolve(*preset, e.params) : d.schema().validate(e.params);
    d.task->check_params(params);
    out.push_back(ResolvedTask{e.task, e.count, std::move(params)});
  }
  return out;
}

Json canonical_config(const Registry& registry, const BuildConfig& config) {
  Json j = Json::object();
  j["master_seed"] = config.master_seed;
  j["preset"] = config.preset ? Json(std::string(preset_name(*config.preset))) : Json(nullptr);
  j["val_per_task"] = config.val_per_task;
  j["duplicate_instruction"] = config.duplicate_instruction;
  Json tasks = Json::array();
  for (const auto& t : resolve_tasks(registry, config)) {
    tasks.push_back(Json{{"task", t.task}, {"count", t.count}, {"params", params_to_json(t.params)}});
  }
  j["tasks"] = std::move(tasks);
  return j;
}

Json record_to_json(const Record& record) {
  Json j = Json::object();
  j["id"] = record.id;
  j["task"] = record.task;
  j["difficulty"] = params_to_json(record.difficulty);
  j["prompt"] = record.prompt;
  j["answer"] = record.answer;
  j["seed"] = record.seed;
  j["split"] = record.split;
  j["schema_version"] = kPayloadSchemaVersion;
  j["payload"] = record.payload;
  return j;
}

std::string record_to_line(const Record& record) { return record_to_json(record).dump(); }

Json collision_to_json(const Collision& c) {
  return Json{{"record_id", c.record_id},
              {"task", c.task},
              {"split", c.split},
              {"benchmark_line", c.benchmark_line},
              {"matched", c.matched}};
}

BuildResult build_records(const Registry& registry, const BuildConfig& config) {
  auto tasks = resolve_tasks(registry, config);
  protocol::PromptOptions prompt_options{config.duplicate_instruction};
  BuildResult result;
  std::unordered_set<std::string> ids;
  Json task_counts = Json::array();

  for (const auto& task : tasks) {
    std::vector<Record> accepted;
    std::uint64_t next_index = 0;
    const std::uint64_t limit = static_cast<std::uint64_t>(task.count) +
                                static_cast<std::uint64_t>(dedup_budget(task.count));
    int duplicates = 0;
    while (static_cast<int>(accepted.size()) < task.count) {
      if (next_index >= limit) {
        throw GenerationExhausted("dataset: task '" + task.task + "' could not reach " +
                                      std::to_string(task.count) + " unique instances",
                                  static_cast<int>(next_index));
      }
      int want = task.count - static_cast<int>(accepted.size());
      int n = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(want), limit - next_index));
      auto block = generate_block(registry, task, config.master_seed, next_index, n, config.threads);
      next_index += static_cast<std::uint64_t>(n);
      for (auto& inst : block) {
        Record r;
        r.prompt = protocol::render_training_prompt(inst.prompt, prompt_options);
        r.id = prompt_id(r.prompt);
        if (!ids.insert(r.id).second) {
          ++duplicates;
          continue;
        }
        r.task = task.task;
        r.difficulty = inst.params;
        r.answer = std::move(inst.reference_answer);
        r.seed = inst.seed;
        r.payload = std::move(inst.payload);
        accepted.push_back(std::move(r));
      }
    }
    std::size_t n_train = accepted.size() - static_cast<std::size_t>(config.val_per_task);
    for (std::size_t i = 0; i < accepted.size(); ++i) {
      accepted[i].split = i < n_train ? "train" : "val";
      (i < n_train ? result.train : result.val).push_back(std::move(accepted[i]));
    }
    task_counts.push_back(Json{{"task", task.task},
                               {"params", params_to_json(task.params)},
                               {"train", n_train},
                               {"val", config.val_per_task},
                               {"duplicates_replaced", duplicates}});
  }

  Json contamination = nullptr;
  if (!config.contamination_file.empty()) {
    auto bench = load_benchmark(config.contamination_file);
    std::vector<Record> all = result.train;
    all.insert(all.end(), result.val.begin(), result.val.end());
    result.collisions = contamination_check(all, bench);
    std::string bench_hash;
    {
      std::ifstream in(config.contamination_file, std::ios::binary);
      std::ostringstream bytes;
      bytes << in.rdbuf();
      bench_hash = sha256_hex(bytes.str());
    }
    Json hits = Json::array();
    for (const auto& c : result.collisions) hits.push_back(collision_to_json(c));
    contamination = Json{{"benchmark_sha256", bench_hash},
                         {"benchmark_prompts", bench.size()},
                         {"collisions", std::move(hits)}};
    if (config.fail_on_contamination && !result.collisions.empty()) {
      throw ContaminationError("dataset: " + std::to_string(result.collisions.size()) +
                                   " record(s) match benchmark prompts",
                               result.collisions);
    }
  }

  Json canonical = canonical_config(registry, config);
  Json m = Json::object();
  m["tool"] = "logicforge";
  m["version"] = kVersion;
  m["schema_version"] = kPayloadSchemaVersion;
  m["config_sha256"] = sha256_hex(canonical.dump());
  m["config"] = std::move(canonical);
  m["tasks"] = std::move(task_counts);
  m["files"] = Json{
      {"train.jsonl", Json{{"records", result.train.size()}, {"sha256", sha256_hex(jsonl(result.train))}}},
      {"val.jsonl", Json{{"records", result.val.size()}, {"sha256", sha256_hex(jsonl(result.val))}}}};
  m["contamination"] = std::move(contamination);
  result.manifest = std::move(m);
  return result;
}

BuildResult build_dataset(const Registry& registry, const BuildConfig& config) {
  if (config.output_dir.empty()) throw ParamError("config: 'output_dir' is required");
  BuildResult result = build_records(registry, config);
  std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "train.jsonl", jsonl(result.train));
  write_file(dir / "val.jsonl", jsonl(result.val));
  write_file(dir / "manifest.json", result.manifest.dump(2) + "\n");
  return result;
}

std::string_view strip_training_template(std::string_view prompt) {
  std::string head = std::string(protocol::training_instruction()) + "\n\n";
  for (int copies = 0; copies < 2 && prompt.substr(0, head.size()) == head; ++copies) {
    prompt.remove_prefix(head.size());
  }
  return prompt;
}

std::vector<BenchmarkPrompt> read_benchmark(std::istream& in, const std::string& source) {
  std::vector<BenchmarkPrompt> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("prompt") || !j.at("prompt").is_string()) {
      throw Error(source + ":" + std::to_string(number) + ": expected a JSON object with a \"prompt\" string");
    }
    out.push_back(BenchmarkPrompt{number, normalize_prompt(j.at("prompt").get<std::string>())});
  }
  if (in.bad()) throw Error("cannot read " + source);
  return out;
}

std::vector<BenchmarkPrompt> load_benchmark(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open benchmark file " + path);
  return read_benchmark(in, path);
}

std::vector<Collision> contamination_check(std::span<const Record> records,
                                           std::span<const BenchmarkPrompt> benchmark) {
  std::unordered_map<std::string, std::vector<std::size_t>> lines;
  for (const auto& b : benchmark) lines[b.normalized].push_back(b.line);
  std::vector<Collision> out;
  for (const auto& r : records) {
    std::string full = normalize_prompt(r.prompt);
    std::string problem = normalize_prompt(strip_training_template(r.prompt));
    std::vector<std::pair<std::size_t, std::string>> hits;
    if (auto it = lines.find(full); it != lines.end()) {
      for (auto l : it->second) hits.emplace_back(l, "prompt");
    }
    if (problem != full) {
      if (auto it = lines.find(problem); it != lines.end()) {
        for (auto l : it->second) hits.emplace_back(l, "problem");
      }
    }
    std::sort(hits.begin(), hits.end());
    for (auto& [l, kind] : hits) out.push_back(Collision{r.id, r.task, r.split, l, kind});
  }
  return out;
}

std::vector<Record> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<Record> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("prompt") || !j.at("prompt").is_string()) {
      throw Error(path + ":" + std::to_string(number) + ": expected a record with a \"prompt\" string");
    }
    Record r;
    r.prompt = j.at("prompt").get<std::string>();
    r.id = j.contains("id") && j.at("id").is_string() ? j.at("id").get<std::string>() : prompt_id(r.prompt);
    if (j.contains("task") && j.at("task").is_string()) r.task = j.at("task").get<std::string>();
    if (j.contains("split") && j.at("split").is_string()) r.split = j.at("split").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

Stats compute_stats(std::istream& in) {
  struct Acc {
    int k = 0;
    int instances = 0;
    std::int64_t successes = 0;
    std::int64_t solved = 0;
  };
  std::map<std::string, Acc> acc;
  Stats stats;
  std::string line;
  std::size_t number = 0;
  auto skip = [&](const std::string& why) {
    ++stats.skipped;
    stats.warnings.push_back("line " + std::to_string(number) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      skip("not a JSON object");
      continue;
    }
    if (!j.contains("task") || !j.at("task").is_string()) {
      skip("missing task");
      continue;
    }
    if (!j.contains("rewards") || !j.at("rewards").is_array() || j.at("rewards").empty()) {
      skip("rewards must be a non-empty array");
      continue;
    }
    std::vector<int> rewards;
    bool ok = true;
    for (const auto& v : j.at("rewards")) {
      if (!v.is_number_integer() || (v.get<std::int64_t>() != 0 && v.get<std::int64_t>() != 1)) {
        ok = false;
        break;
      }
      rewards.push_back(v.get<int>());
    }
    if (!ok) {
      skip("rewards must be 0 or 1");
      continue;
    }
    Acc& a = acc[j.at("task").get<std::string>()];
    int k = static_cast<int>(rewards.size());
    if (a.instances > 0 && a.k != k) {
      skip("expected " + std::to_string(a.k) + " rewards, found " + std::to_string(k));
      continue;
    }
    a.k = k;
    ++a.instances;
    for (int r : rewards) a.successes += r;
    a.solved += protocol::pass_at_k(rewards);
  }
  for (const auto& [task, a] : acc) {
    stats.rows.push_back(StatsRow{task, a.instances, a.k,
                                  Rational::of(a.successes, static_cast<std::int64_t>(a.instances) * a.k),
                                  Rational::of(a.solved, a.instances)});
  }
  return stats;
}

std::string stats_csv(const Stats& stats) {
  std::string out = "task,instances,k,avg_at_k,pass_at_k\n";
  for (const auto& r : stats.rows) {
    out += r.task + "," + std::to_string(r.instances) + "," + std::to_string(r.k) + "," +
           decimal(r.avg_at_k) + "," + decimal(r.pass_at_k) + "\n";
  }
  return out;
}

}  // namespace logicforge::dataset
