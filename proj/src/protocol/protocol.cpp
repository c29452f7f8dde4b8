#include "logicforge/protocol/protocol.h"

#include <stdexcept>

#include "logicforge/core/errors.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::protocol {
namespace {

constexpr std::string_view kInstruction =
    "Solve the following problem step by step. First, think about the reasoning process in the "
    "mind and then provide the answer. The reasoning process is enclosed within <think> </think> "
    "and the final answer is enclosed within <answer> </answer> tags, respectively, i.e., "
    "<think> reasoning process here </think> <answer> answer here</answer>.";

constexpr std::string_view kReflectionPhrases[] = {
    "recheck", "rethink", "try again", "let's correct it", "re-evaluate", "check again",
    "think again"};

struct TagPair {
  std::size_t content_begin;
  std::size_t content_end;
};

std::optional<TagPair> last_pair(std::string_view text, std::string_view open,
                                 std::string_view close) {
  std::optional<TagPair> found;
  std::size_t pos = text.find(open);
  while (pos != std::string_view::npos) {
    std::size_t begin = pos + open.size();
    std::size_t end = text.find(close, begin);
    std::size_t next_open = text.find(open, begin);
    if (end == std::string_view::npos) break;
    if (next_open == std::string_view::npos || end < next_open) found = TagPair{begin, end};
    pos = next_open;
  }
  return found;
}

void check_rewards(std::span<const int> rewards) {
  if (rewards.empty()) throw std::invalid_argument("attempt set must not be empty");
  for (int r : rewards) {
    if (r != 0 && r != 1) throw std::invalid_argument("rewards must be 0 or 1");
  }
}

}  // namespace

std::optional<std::string> last_answer(std::string_view response) {
  auto pair = last_pair(response, "<answer>", "</answer>");
  if (!pair) return std::nullopt;
  return std::string(
      payload::trim(response.substr(pair->content_begin, pair->content_end - pair->content_begin)));
}

ParsedResponse check_format(std::string_view response) {
  ParsedResponse out;
  if (!last_pair(response, "<think>", "</think>")) return out;
  auto answer = last_answer(response);
  if (!answer) return out;
  out.format_ok = true;
  out.answer_text = std::move(answer);
  return out;
}

int binary_reward(bool format_ok, bool correct) { return format_ok && correct ? 1 : 0; }

Verdict compute_reward(const Registry& registry, std::string_view task, const Json& payload,
                       std::string_view response) {
  const Task& plugin = registry.task(task);
  Verdict v;
  v.format_ok = check_format(response).format_ok;
  auto answer = last_answer(response);
  if (!answer) {
    v.detail = "no answer tag";
  } else {
    try {
      plugin.check_payload(payload);
      auto value = plugin.parse_answer(payload, *answer);
      if (!value) {
        v.detail = "answer does not follow the task grammar";
      } else {
        v.correct = plugin.verify(payload, *value);
      }
    } catch (const StructuralError& e) {
      v.detail = std::string("malformed payload or answer: ") + e.what();
    } catch (const std::exception& e) {
      v.detail = std::string("verification failed: ") + e.what();
    }
  }
  v.reward = binary_reward(v.format_ok, v.correct);
  return v;
}

Rational avg_at_k(std::span<const int> rewards) {
  check_rewards(rewards);
  std::int64_t hits = 0;
  for (int r : rewards) hits += r;
  return Rational::of(hits, static_cast<std::int64_t>(rewards.size()));
}

int pass_at_k(std::span<const int> rewards) {
  check_rewards(rewards);
  for (int r : rewards) {
    if (r == 1) return 1;
  }
  return 0;
}

std::span<const std::string_view> reflection_phrases() { return kReflectionPhrases; }

bool has_reflection(std::string_view response) {
  std::string lower = payload::to_lower(response);
  for (auto phrase : kReflectionPhrases) {
    if (lower.find(phrase) != std::string::npos) return true;
  }
  return false;
}

Rational reflection_ratio(std::span<const std::string> responses) {
  if (responses.empty()) throw std::invalid_argument("reflection_ratio needs at least one response");
  std::int64_t hits = 0;
  for (const auto& r : responses) hits += has_reflection(r) ? 1 : 0;
  return Rational::of(hits, static_cast<std::int64_t>(responses.size()));
}

std::string_view training_instruction() { return kInstruction; }

std::string render_training_prompt(std::string_view problem_text, const PromptOptions& options) {
  std::string out(kInstruction);
  out += "\n\n";
  if (options.duplicate_instruction) {
    out += kInstruction;
    out += "\n\n";
  }
  out += problem_text;
  return out;
}

}  // namespace logicforge::protocol
