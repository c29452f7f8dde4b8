#include "logicforge/calibration/calibration.h"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "logicforge/core/hash.h"
#include "logicforge/protocol/protocol.h"

namespace logicforge::calibration {
namespace {

constexpr int kPending = -1;

template <typename T>
T read_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw StructuralError(std::string("calibration: field '") + key + "' has the wrong type");
  }
}

int read_positive(const Json& j, const char* key, int fallback, int max = 1'000'000) {
  if (j.contains(key) && !j.at(key).is_number_integer()) {
    throw StructuralError(std::string("calibration: '") + key + "' must be an integer");
  }
  int v = read_or<int>(j, key, fallback);
  if (v < 1 || v > max) {
    throw StructuralError(std::string("calibration: '") + key + "' must be in [1, " +
                          std::to_string(max) + "]");
  }
  return v;
}

Rational read_rational(const Json& value, const char* what) {
  std::optional<Rational> r;
  if (value.is_number_integer()) {
    r = Rational(value.get<std::int64_t>());
  } else if (value.is_string()) {
    r = Rational::parse(value.get<std::string>());
  } else if (value.is_number_float()) {
    r = Rational::parse(value.dump());
  }
  if (!r) throw StructuralError(std::string("calibration: cannot read ") + what);
  return *r;
}

Rational summarize_avg(const std::vector<std::vector<int>>& rewards) {
  std::vector<int> flat;
  for (const auto& row : rewards) flat.insert(flat.end(), row.begin(), row.end());
  return protocol::avg_at_k(flat);
}

Rational summarize_pass(const std::vector<std::vector<int>>& rewards) {
  std::int64_t solved = 0;
  for (const auto& row : rewards) solved += protocol::pass_at_k(row);
  return Rational::of(solved, static_cast<std::int64_t>(rewards.size()));
}

bool finished(const LevelResult& level) {
  for (const auto& row : level.rewards) {
    if (std::find(row.begin(), row.end(), kPending) != row.end()) return false;
  }
  return !level.rewards.empty();
}

Json bound_json(const Ladder& ladder, const BoundResult& result, int k) {
  Json j = Json::object();
  j["model"] = result.model;
  j["k"] = k;
  if (result.level) {
    j["level_index"] = *result.level;
    j["value"] = ladder.levels[*result.level].str();
  } else {
    j["level_index"] = nullptr;
    j["value"] = nullptr;
  }
  j["non_monotone"] = result.non_monotone;
  Json levels = Json::array();
  for (const auto& level : result.scanned) levels.push_back(level_to_json(level));
  j["levels"] = std::move(levels);
  return j;
}

enum class Bound { kUpper, kLower };

BoundResult scan(const Registry& registry, const Ladder& ladder, ChatClient& client,
                 const ScanOptions& options, int parallelism, Bound bound) {
  ladder.validate(registry);
  if (options.patience < 1) throw ParamError("calibration: patience must be at least 1");
  BoundResult result;
  result.model = client.identity();
  int zero_run = 0;
  bool seen_zero = false;
  const Rational half = Rational::of(1, 2);
  for (std::size_t i = 0; i < ladder.levels.size(); ++i) {
    EstimateOptions est{options.n_instances, options.k, options.seed, i, parallelism,
                        options.duplicate_instruction};
    try {
      result.scanned.push_back(
          estimate_pass(registry, ladder.task, ladder.params_at(registry, i), client, est));
    } catch (const TransportError& e) {
      Json j = bound_json(ladder, result, options.k);
      if (!e.partial().is_null()) {
        Json partial = e.partial();
        if (partial.is_object()) partial["value"] = ladder.levels[i].str();
        j["levels"].push_back(std::move(partial));
      }
      throw TransportError(e.what(), std::move(j));
    }
    result.scanned.back().value = ladder.levels[i];
    const LevelResult& level = result.scanned.back();
    bool nothing = level.avg == Rational(0);
    if (bound == Bound::kUpper) {
      if (!nothing) {
        if (seen_zero) result.non_monotone = true;
        result.level = i;
      }
    } else if (!nothing && level.avg < half) {
      result.level = i;
      break;
    }
    if (nothing) {
      seen_zero = true;
      if (++zero_run >= options.patience) break;
    } else {
      zero_run = 0;
    }
  }
  return result;
}

Json scan_options_json(int k, const CalibrationConfig& config) {
  return Json{{"k", k}, {"n_instances", config.n_instances}, {"patience", config.patience}};
}

}  // namespace

EndpointConfig endpoint_from_json(const Json& j) {
  if (!j.is_object()) throw StructuralError("endpoint: expected a JSON object");
  if (j.contains("api_key")) {
    throw StructuralError("endpoint: literal API keys are not accepted; set 'api_key_env' to the "
                          "name of an environment variable instead");
  }
  EndpointConfig c;
  if (!j.contains("base_url") || !j.at("base_url").is_string()) {
    throw StructuralError("endpoint: 'base_url' is required");
  }
  c.base_url = j.at("base_url").get<std::string>();
  c.model_name = read_or<std::string>(j, "model_name", "");
  if (c.model_name.empty()) c.model_name = c.base_url;
  c.api_key_env = read_or<std::string>(j, "api_key_env", "");
  if (j.contains("temperature")) {
    c.temperature = read_rational(j.at("temperature"), "temperature");
    if (c.temperature < Rational(0) || c.temperature > Rational(2)) {
      throw StructuralError("endpoint: temperature must be in [0, 2]");
    }
  }
  c.max_tokens = read_positive(j, "max_tokens", c.max_tokens);
  c.request_timeout_s = read_positive(j, "request_timeout_s", c.request_timeout_s, 3600);
  if (j.contains("max_retries")) {
    if (!j.at("max_retries").is_number_integer()) {
      throw StructuralError("endpoint: 'max_retries' must be an integer");
    }
    c.max_retries = j.at("max_retries").get<int>();
    if (c.max_retries < 0 || c.max_retries > 20) {
      throw StructuralError("endpoint: 'max_retries' must be in [0, 20]");
    }
  }
  c.parallelism = read_positive(j, "parallelism", c.parallelism, 256);
  return c;
}

Json endpoint_to_json(const EndpointConfig& config) {
  return Json{{"base_url", config.base_url},
              {"model_name", config.model_name},
              {"api_key_env", config.api_key_env},
              {"temperature", config.temperature.str()},
              {"max_tokens", config.max_tokens},
              {"request_timeout_s", config.request_timeout_s},
              {"max_retries", config.max_retries},
              {"parallelism", config.parallelism}};
}

std::string reference_response(const Registry& registry, const Instance& instance) {
  const Task& task = registry.task(instance.task);
  return "<think>Reference solution.</think> <answer>" +
         task.format_answer(instance.reference_answer) + "</answer>";
}

std::unique_ptr<ChatClient> make_client(const Registry& registry, const EndpointConfig& config) {
  if (config.base_url == "mock://reference") {
    const Registry* reg = &registry;
    return std::make_unique<MockChatClient>(config.model_name, [reg](const ChatRequest& r) {
      if (!r.instance) return ChatResult{"", false};
      return ChatResult{reference_response(*reg, *r.instance), false};
    });
  }
  if (config.base_url == "mock://wrong") {
    return std::make_unique<MockChatClient>(config.model_name, [](const ChatRequest&) {
      return ChatResult{"<think>guess</think> <answer>x</answer>", false};
    });
  }
  if (config.base_url.rfind("mock://", 0) == 0) {
    throw ParamError("endpoint: unknown mock endpoint " + config.base_url);
  }
  return std::make_unique<HttpChatClient>(config);
}

Json level_to_json(const LevelResult& level) {
  Json j = Json::object();
  j["value"] = level.value.str();
  j["params"] = params_to_json(level.params);
  j["n_instances"] = level.n_instances;
  j["k"] = level.k;
  j["instance_ids"] = level.instance_ids;
  Json rewards = Json::array();
  for (const auto& row : level.rewards) {
    Json r = Json::array();
    for (int v : row) {
      if (v == kPending) {
        r.push_back(nullptr);
      } else {
        r.push_back(v);
      }
    }
    rewards.push_back(std::move(r));
  }
  j["rewards"] = std::move(rewards);
  Json timeouts = Json::array();
  for (const auto& [i, a] : level.timeouts) timeouts.push_back(Json::array({i, a}));
  j["timeouts"] = std::move(timeouts);
  bool complete = finished(level);
  j["complete"] = complete;
  j["avg"] = complete ? Json(level.avg.str()) : Json(nullptr);
  j["pass_at_k"] = complete ? Json(level.pass_at_k.str()) : Json(nullptr);
  return j;
}

LevelResult estimate_pass(const Registry& registry, std::string_view task,
                          const DifficultyParams& params, ChatClient& client,
                          const EstimateOptions& options) {
  if (options.n_instances < 1) throw ParamError("calibration: n_instances must be at least 1");
  if (options.k < 1) throw ParamError("calibration: k must be at least 1");
  if (options.level_index >= (std::uint64_t{1} << 32)) {
    throw ParamError("calibration: level index out of range");
  }

  LevelResult level;
  level.params = params;
  level.n_instances = options.n_instances;
  level.k = options.k;

  std::vector<Instance> instances;
  std::vector<std::string> prompts;
  protocol::PromptOptions prompt_options{options.duplicate_instruction};
  for (int i = 0; i < options.n_instances; ++i) {
    std::uint64_t index = (options.level_index << 32) | static_cast<std::uint64_t>(i);
    instances.push_back(
        generate_instance(registry, task, params, derive_seed(options.seed, task, index)));
    level.params = instances.back().params;
    level.instance_ids.push_back(instances.back().id);
    prompts.push_back(protocol::render_training_prompt(instances.back().prompt, prompt_options));
  }
  level.rewards.assign(instances.size(), std::vector<int>(static_cast<std::size_t>(options.k), kPending));
  std::vector<std::vector<char>> timed_out(instances.size(),
                                           std::vector<char>(static_cast<std::size_t>(options.k), 0));

  const std::size_t jobs = instances.size() * static_cast<std::size_t>(options.k);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::optional<std::string> error;

  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      std::size_t i = job / static_cast<std::size_t>(options.k);
      int a = static_cast<int>(job % static_cast<std::size_t>(options.k));
      try {
        ChatResult reply = client.complete(ChatRequest{&instances[i], prompts[i], a});
        int reward = 0;
        if (reply.timed_out) {
          timed_out[i][static_cast<std::size_t>(a)] = 1;
        } else {
          reward = protocol::compute_reward(registry, task, instances[i].payload, reply.text).reward;
        }
        level.rewards[i][static_cast<std::size_t>(a)] = reward;
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!error) error = e.what();
        stop.store(true);
        return;
      }
    }
  };

  int threads = std::clamp(options.parallelism, 1, 256);
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (int a = 0; a < options.k; ++a) {
      if (timed_out[i][static_cast<std::size_t>(a)]) level.timeouts.emplace_back(static_cast<int>(i), a);
    }
  }
  if (error) throw TransportError(*error, level_to_json(level));
  level.avg = summarize_avg(level.rewards);
  level.pass_at_k = summarize_pass(level.rewards);
  return level;
}

DifficultyParams Ladder::params_at(const Registry& registry, std::size_t index) const {
  if (index >= levels.size()) throw ParamError("calibration: ladder index out of range");
  const Task& t = registry.task(task);
  DifficultyParams p = fixed;
  p.set(axis, levels[index]);
  DifficultyParams valid = t.schema().validate(p);
  t.check_params(valid);
  return valid;
}

void Ladder::validate(const Registry& registry) const {
  const Task& t = registry.task(task);
  if (!t.schema().find(axis)) {
    throw ParamError("calibration: task '" + task + "' has no parameter '" + axis + "'");
  }
  if (levels.empty()) throw ParamError("calibration: the ladder needs at least one level");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i - 1] < levels[i])) throw ParamError("calibration: levels must be strictly increasing");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) params_at(registry, i);
}

BoundResult find_upper_bound(const Registry& registry, const Ladder& ladder, ChatClient& strong,
                             const ScanOptions& options, int parallelism) {
  return scan(registry, ladder, strong, options, parallelism, Bound::kUpper);
}

BoundResult find_lower_bound(const Registry& registry, const Ladder& ladder, ChatClient& chat,
                             const ScanOptions& options, int parallelism) {
  return scan(registry, ladder, chat, options, parallelism, Bound::kLower);
}

Json bound_to_json(const Ladder& ladder, const BoundResult& result) {
  int k = result.scanned.empty() ? 0 : result.scanned.front().k;
  return bound_json(ladder, result, k);
}

CalibrationConfig calibration_config_from_json(const Registry& registry, const Json& j) {
  if (!j.is_object()) throw StructuralError("calibration: config must be a JSON object");
  CalibrationConfig c;
  if (!j.contains("task") || !j.at("task").is_string()) {
    throw StructuralError("calibration: 'task' is required");
  }
  if (!j.contains("axis") || !j.at("axis").is_string()) {
    throw StructuralError("calibration: 'axis' is required");
  }
  c.ladder.task = j.at("task").get<std::string>();
  c.ladder.axis = j.at("axis").get<std::string>();
  const Task& t = registry.task(c.ladder.task);

  if (!j.contains("levels") || !j.at("levels").is_array()) {
    throw StructuralError("calibration: 'levels' must be an array");
  }
  for (const auto& v : j.at("levels")) c.ladder.levels.push_back(read_rational(v, "a level value"));

  DifficultyParams fixed = j.contains("fixed") ? params_from_json(j.at("fixed")) : DifficultyParams{};
  if (j.contains("preset")) {
    auto preset = parse_preset(read_or<std::string>(j, "preset", ""));
    if (!preset) throw StructuralError("calibration: 'preset' must be \"easy\" or \"hard\"");
    fixed = t.schema().resolve(*preset, fixed);
  }
  c.ladder.fixed = fixed;

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw StructuralError("calibration: 'seed' must be a non-negative integer");
    }
    if (j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() < 0) {
      throw StructuralError("calibration: 'seed' must be a non-negative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.n_instances = read_positive(j, "n_instances", c.n_instances);
  c.k_upper = read_positive(j, "k_upper", c.k_upper);
  c.k_lower = read_positive(j, "k_lower", c.k_lower);
  c.patience = read_positive(j, "patience", c.patience);
  c.duplicate_instruction = read_or<bool>(j, "duplicate_instruction", false);
  if (j.contains("strong")) c.strong = endpoint_from_json(j.at("strong"));
  if (j.contains("chat")) c.chat = endpoint_from_json(j.at("chat"));
  c.ladder.validate(registry);
  return c;
}

Json run_calibration(const Registry& registry, const CalibrationConfig& config, ChatClient* strong,
                     ChatClient* chat) {
  config.ladder.validate(registry);
  Json report = Json::object();
  report["task"] = config.ladder.task;
  report["axis"] = config.ladder.axis;
  Json levels = Json::array();
  for (const auto& v : config.ladder.levels) levels.push_back(v.str());
  report["levels"] = std::move(levels);
  report["fixed"] = params_to_json(config.ladder.fixed);
  report["seed"] = config.seed;
  report["duplicate_instruction"] = config.duplicate_instruction;
  report["upper_bound"] = nullptr;
  report["lower_bound"] = nullptr;

  auto run = [&](ChatClient* client, const std::optional<EndpointConfig>& endpoint, int k,
                 Bound bound, const char* key) {
    if (!client) return;
    ScanOptions options{config.n_instances, k, config.patience, config.seed,
                        config.duplicate_instruction};
    int parallelism = endpoint ? endpoint->parallelism : 1;
    try {
      BoundResult r = bound == Bound::kUpper
                          ? find_upper_bound(registry, config.ladder, *client, options, parallelism)
                          : find_lower_bound(registry, config.ladder, *client, options, parallelism);
      Json j = bound_json(config.ladder, r, k);
      if (endpoint) j["endpoint"] = endpoint_to_json(*endpoint);
      j["options"] = scan_options_json(k, config);
      report[key] = std::move(j);
    } catch (const TransportError& e) {
      Json j = e.partial();
      if (j.is_object()) j["options"] = scan_options_json(k, config);
      report[key] = std::move(j);
      report["error"] = e.what();
      throw TransportError(e.what(), report);
    }
  };
  run(strong, config.strong, config.k_upper, Bound::kUpper, "upper_bound");
  run(chat, config.chat, config.k_lower, Bound::kLower, "lower_bound");
  return report;
}

}  // namespace logicforge::calibration
