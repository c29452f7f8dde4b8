#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicforge/core/errors.h"
#include "logicforge/core/json.h"
#include "logicforge/core/params.h"
#include "logicforge/core/rational.h"
#include "logicforge/core/registry.h"

// Difficulty calibration: sample completions from a chat endpoint on
// generated instances and locate the upper bound (a strong model still solves
// something within k attempts) and the lower bound (a chat model's pass rate
// falls strictly between 0 and 1/2) along one parameter axis.
namespace logicforge::calibration {

struct EndpointConfig {
  std::string base_url;  // e.g. "https://host/v1"; "mock://reference" and "mock://wrong" are built in
  std::string model_name;
  // Name of the environment variable holding the API key. The key itself is
  // read at request time and never stored in this struct.
  std::string api_key_env;
  Rational temperature = Rational::of(6, 10);
  int max_tokens = 4096;
  int request_timeout_s = 120;
  int max_retries = 4;
  int parallelism = 4;
};

// Throws StructuralError on missing or invalid fields.
EndpointConfig endpoint_from_json(const Json& j);
Json endpoint_to_json(const EndpointConfig& config);

struct ChatRequest {
  const Instance* instance = nullptr;
  std::string prompt;  // training-template prompt sent as the user message
  int attempt = 0;
};

struct ChatResult {
  std::string text;
  bool timed_out = false;
};

// Thrown when an endpoint cannot be reached after every retry.
class TransportError : public Error {
 public:
  using Error::Error;
  TransportError(const std::string& what, Json partial) : Error(what), partial_(std::move(partial)) {}
  // Whatever had been measured before the failure.
  const Json& partial() const { return partial_; }

 private:
  Json partial_;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Throws TransportError. Called concurrently from worker threads.
  virtual ChatResult complete(const ChatRequest& request) = 0;
  virtual std::string identity() const = 0;
};

// OpenAI-style POST {base_url}/chat/completions with retries on connection
// failures, HTTP 429 and 5xx (exponential backoff with full jitter). A request
// that times out on every try is reported as timed_out rather than thrown.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(EndpointConfig config);
  ChatResult complete(const ChatRequest& request) override;
  std::string identity() const override { return config_.model_name; }

  // Delay before retry number `retry` (0-based), without jitter, capped.
  static double backoff_seconds(int retry);

 private:
  EndpointConfig config_;
};

// Scripted client for tests and dry runs.
class MockChatClient : public ChatClient {
 public:
  using Script = std::function<ChatResult(const ChatRequest&)>;
  MockChatClient(std::string name, Script script) : name_(std::move(name)), script_(std::move(script)) {}
  ChatResult complete(const ChatRequest& request) override { return script_(request); }
  std::string identity() const override { return name_; }

 private:
  std::string name_;
  Script script_;
};

// Response text carrying the instance's reference answer in correct tags.
std::string reference_response(const Registry& registry, const Instance& instance);

// HttpChatClient, or the built-in mock for "mock://reference" (always the
// reference answer) and "mock://wrong" (always "x").
std::unique_ptr<ChatClient> make_client(const Registry& registry, const EndpointConfig& config);

struct LevelResult {
  Rational value;  // the axis value
  DifficultyParams params;
  int n_instances = 0;
  int k = 0;
  std::vector<std::string> instance_ids;
  std::vector<std::vector<int>> rewards;  // [instance][attempt]
  // (instance, attempt) pairs that timed out and were scored 0.
  std::vector<std::pair<int, int>> timeouts;
  Rational avg;        // mean reward over every attempt
  Rational pass_at_k;  // fraction of instances solved at least once
};

Json level_to_json(const LevelResult& level);

struct EstimateOptions {
  int n_instances = 10;
  int k = 8;
  std::uint64_t seed = 0;
  // Distinguishes the instances of different levels drawn from one seed.
  std::uint64_t level_index = 0;
  int parallelism = 1;
  bool duplicate_instruction = false;
};

// Generates n_instances, asks the client k times for each and scores every
// response with the binary reward.
LevelResult estimate_pass(const Registry& registry, std::string_view task,
                          const DifficultyParams& params, ChatClient& client,
                          const EstimateOptions& options);

struct Ladder {
  std::string task;
  std::string axis;
  std::vector<Rational> levels;  // strictly increasing
  DifficultyParams fixed;        // every other parameter

  // Throws ParamError when a level does not validate.
  DifficultyParams params_at(const Registry& registry, std::size_t index) const;
  void validate(const Registry& registry) const;
};

struct BoundResult {
  std::optional<std::size_t> level;  // index into the ladder
  std::vector<LevelResult> scanned;
  // Upper bound only: some level passed after a lower level failed.
  bool non_monotone = false;
  std::string model;
};

struct ScanOptions {
  int n_instances = 10;
  int k = 10;
  // Stop after this many consecutive levels with nothing solved.
  int patience = 2;
  std::uint64_t seed = 0;
  bool duplicate_instruction = false;
};

// Highest level with pass@k > 0, scanning upward.
BoundResult find_upper_bound(const Registry& registry, const Ladder& ladder, ChatClient& strong,
                             const ScanOptions& options, int parallelism = 1);
// Lowest level whose average pass rate r satisfies 0 < r < 1/2, scanning
// upward; also stops after `patience` consecutive all-zero levels.
BoundResult find_lower_bound(const Registry& registry, const Ladder& ladder, ChatClient& chat,
                             const ScanOptions& options, int parallelism = 1);

Json bound_to_json(const Ladder& ladder, const BoundResult& result);

// Calibration run description, read from JSON:
// {"task", "axis", "levels", "fixed" | "preset", "seed", "n_instances",
//  "k_upper", "k_lower", "patience", "duplicate_instruction",
//  "strong": endpoint, "chat": endpoint}; either endpoint may be omitted.
struct CalibrationConfig {
  Ladder ladder;
  std::uint64_t seed = 0;
  int n_instances = 10;
  int k_upper = 10;
  int k_lower = 8;
  int patience = 2;
  bool duplicate_instruction = false;
  std::optional<EndpointConfig> strong;
  std::optional<EndpointConfig> chat;
};

CalibrationConfig calibration_config_from_json(const Registry& registry, const Json& j);

// Runs whichever bounds have an endpoint and returns the report. Key order and
// content are deterministic for deterministic clients.
Json run_calibration(const Registry& registry, const CalibrationConfig& config, ChatClient* strong,
                     ChatClient* chat);

}  // namespace logicforge::calibration
