#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "logicforge/calibration/calibration.h"
#include "logicforge/core/hash.h"
#include "logicforge/dataset/dataset.h"
#include "logicforge/protocol/protocol.h"
#include "logicforge/protocol/scoring.h"
#include "logicforge/tasks/builtin.h"
#include "logicforge/version.h"

namespace {

using namespace logicforge;

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kFailure = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Json read_json(const std::string& path) {
  Json j = Json::parse(read_text(path), nullptr, false);
  if (j.is_discarded()) throw StructuralError(path + " is not valid JSON");
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
}

Json load_payload(const Registry& registry, const std::string& task, const std::string& path) {
  Json payload = scoring::instance_payload(read_json(path));
  registry.task(task).check_payload(payload);
  return payload;
}

int cmd_gen(const std::string& config_path, const std::string& output_dir, int threads,
            const std::string& benchmark, bool fail_on_contamination) {
  const Registry& registry = builtin_registry();
  auto config = dataset::build_config_from_json(registry, read_json(config_path));
  if (!output_dir.empty()) config.output_dir = output_dir;
  if (threads > 0) config.threads = threads;
  if (!benchmark.empty()) config.contamination_file = benchmark;
  if (fail_on_contamination) config.fail_on_contamination = true;
  auto result = dataset::build_dataset(registry, config);
  std::cerr << "wrote " << result.train.size() << " train and " << result.val.size()
            << " val records to " << config.output_dir << "\n";
  if (!result.collisions.empty()) {
    std::cerr << "warning: " << result.collisions.size()
              << " record(s) match benchmark prompts; see manifest.json\n";
  }
  return kOk;
}

int cmd_verify(const std::string& task, const std::string& instance_path, const std::string& answer_path) {
  const Registry& registry = builtin_registry();
  Json payload = load_payload(registry, task, instance_path);
  std::string text = read_text(answer_path);
  const Task& plugin = registry.task(task);
  // Answer text first; a file holding the canonical JSON value also works.
  std::optional<Json> answer = plugin.parse_answer(payload, text);
  if (!answer) {
    Json j = Json::parse(text, nullptr, false);
    if (!j.is_discarded()) answer = j;
  }
  if (!answer) {
    std::cout << "false\n";
    std::cerr << "answer does not follow the task's answer format\n";
    return kFalse;
  }
  bool ok = false;
  try {
    ok = verify_answer(registry, task, payload, *answer);
  } catch (const StructuralError& e) {
    std::cerr << e.what() << "\n";
  }
  std::cout << (ok ? "true" : "false") << "\n";
  return ok ? kOk : kFalse;
}

int cmd_reward(const std::string& task, const std::string& instance_path, const std::string& response_path) {
  const Registry& registry = builtin_registry();
  Json payload = load_payload(registry, task, instance_path);
  auto verdict = protocol::compute_reward(registry, task, payload, read_text(response_path));
  Json out = {{"format_ok", verdict.format_ok},
              {"correct", verdict.correct},
              {"reward", verdict.reward},
              {"detail", verdict.detail}};
  std::cout << out.dump() << "\n";
  return verdict.reward == 1 ? kOk : kFalse;
}

int cmd_calibrate(const std::string& config_path, const std::string& out_path) {
  const Registry& registry = builtin_registry();
  auto config = calibration::calibration_config_from_json(registry, read_json(config_path));
  if (!config.strong && !config.chat) {
    throw ParamError("calibration: configure a 'strong' or 'chat' endpoint");
  }
  std::unique_ptr<calibration::ChatClient> strong, chat;
  if (config.strong) strong = calibration::make_client(registry, *config.strong);
  if (config.chat) chat = calibration::make_client(registry, *config.chat);
  try {
    Json report = calibration::run_calibration(registry, config, strong.get(), chat.get());
    write_text(out_path, report.dump(2) + "\n");
    return kOk;
  } catch (const calibration::TransportError& e) {
    if (!e.partial().is_null()) write_text(out_path, e.partial().dump(2) + "\n");
    throw;
  }
}

int cmd_stats(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw Error("cannot open " + in_path);
  auto stats = dataset::compute_stats(in);
  for (const auto& w : stats.warnings) std::cerr << "warning: " << in_path << ": " << w << "\n";
  if (stats.skipped > 0) std::cerr << stats.skipped << " malformed row(s) skipped\n";
  write_text(out_path, dataset::stats_csv(stats));
  return kOk;
}

int cmd_contamination(const std::string& data_path, const std::string& bench_path) {
  auto records = dataset::load_records(data_path);
  auto bench = dataset::load_benchmark(bench_path);
  auto hits = dataset::contamination_check(records, bench);
  for (const auto& c : hits) std::cout << dataset::collision_to_json(c).dump() << "\n";
  std::cerr << records.size() << " records checked against " << bench.size() << " benchmark prompts, "
            << hits.size() << " collision(s)\n";
  return hits.empty() ? kOk : kFalse;
}

int cmd_instance(const std::string& task, const std::string& preset_name, const std::string& params_json,
                 std::uint64_t seed, bool training_prompt) {
  const Registry& registry = builtin_registry();
  auto preset = parse_preset(preset_name);
  if (!preset) throw ParamError("unknown preset '" + preset_name + "'");
  DifficultyParams overrides;
  if (!params_json.empty()) {
    Json j = Json::parse(params_json, nullptr, false);
    if (j.is_discarded()) throw ParamError("--params is not valid JSON");
    overrides = params_from_json(j);
  }
  auto params = registry.at(task).schema().resolve(*preset, overrides);
  Instance inst = generate_instance(registry, task, params, seed);
  Json j = instance_to_json(inst);
  if (training_prompt) j["training_prompt"] = protocol::render_training_prompt(inst.prompt);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_tasks(bool as_json) {
  const Registry& registry = builtin_registry();
  Json out = Json::array();
  for (const auto& d : registry.descriptors()) {
    Json params = Json::array();
    for (const auto& s : d.schema().specs()) {
      params.push_back(Json{{"name", s.name},
                            {"min", s.min.str()},
                            {"max", s.max.str()},
                            {"easy", s.default_easy.str()},
                            {"hard", s.default_hard.str()},
                            {"description", s.description}});
    }
    out.push_back(Json{{"task", d.id}, {"easy_excluded", d.easy_excluded}, {"params", std::move(params)}});
  }
  if (as_json) {
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  for (const auto& t : out) {
    std::cout << t["task"].get<std::string>() << (t["easy_excluded"].get<bool>() ? "  (not in easy)" : "")
              << "\n";
    for (const auto& p : t["params"]) {
      std::cout << "    " << p["name"].get<std::string>() << " [" << p["min"].get<std::string>() << ", "
                << p["max"].get<std::string>() << "] easy " << p["easy"].get<std::string>() << ", hard "
                << p["hard"].get<std::string>() << ": " << p["description"].get<std::string>() << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic reasoning task generator and verifier", "logicforge"};
  app.set_version_flag("--version", std::string(logicforge::kVersion));
  app.require_subcommand(1);

  std::string config, output_dir, task, instance, answer, response, in, out, data, bench, preset = "easy",
                                                                                          params;
  int threads = 0;
  std::uint64_t seed = 0;
  bool as_json = false, training_prompt = false, fail_on_contamination = false;

  auto* gen = app.add_subcommand("gen", "Build train/val JSONL files from a config");
  gen->add_option("--config", config, "Build config JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--output-dir", output_dir, "Overrides output_dir from the config");
  gen->add_option("--threads", threads, "Overrides threads from the config")->check(CLI::Range(1, 256));
  gen->add_option("--contamination-file", bench, "Benchmark JSONL; overrides the config");
  gen->add_flag("--fail-on-contamination", fail_on_contamination, "Exit with an error on any collision");

  auto* verify = app.add_subcommand("verify", "Check an answer against an instance");
  verify->add_option("--task", task)->required();
  verify->add_option("--instance", instance, "Payload, instance or record JSON")->required();
  verify->add_option("--answer", answer, "Answer text, or the canonical answer JSON")->required();

  auto* reward = app.add_subcommand("reward", "Score a full model response");
  reward->add_option("--task", task)->required();
  reward->add_option("--instance", instance, "Payload, instance or record JSON")->required();
  reward->add_option("--response", response, "Model response text")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Locate difficulty bounds against chat endpoints");
  calibrate->add_option("--config", config, "Calibration config JSON")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--out", out, "Report path (default stdout)");

  auto* stats = app.add_subcommand("stats", "Per-task avg@k and pass@k as CSV");
  stats->add_option("--in", in, "JSONL rows {id, task, rewards}")->required();
  stats->add_option("--out", out, "CSV path (default stdout)");

  auto* contamination = app.add_subcommand("check-contamination", "Find records matching benchmark prompts");
  contamination->add_option("--data", data, "Dataset JSONL")->required();
  contamination->add_option("--benchmark", bench, "Benchmark JSONL with a prompt per line")->required();

  auto* inst = app.add_subcommand("instance", "Generate one instance");
  inst->add_option("--task", task)->required();
  inst->add_option("--preset", preset, "easy or hard");
  inst->add_option("--params", params, "JSON object of parameter overrides");
  inst->add_option("--seed", seed);
  inst->add_flag("--training-prompt", training_prompt, "Also emit the templated prompt");

  auto* tasks = app.add_subcommand("tasks", "List tasks and their parameters");
  tasks->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFailure;
  }

  try {
    if (*gen) return cmd_gen(config, output_dir, threads, bench, fail_on_contamination);
    if (*verify) return cmd_verify(task, instance, answer);
    if (*reward) return cmd_reward(task, instance, response);
    if (*calibrate) return cmd_calibrate(config, out);
    if (*stats) return cmd_stats(in, out);
    if (*contamination) return cmd_contamination(data, bench);
    if (*inst) return cmd_instance(task, preset, params, seed, training_prompt);
    if (*tasks) return cmd_tasks(as_json);
  } catch (const logicforge::dataset::ContaminationError& e) {
    for (const auto& c : e.collisions()) std::cerr << logicforge::dataset::collision_to_json(c).dump() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
