#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "logicforge/core/json.h"
#include "logicforge/core/rational.h"
#include "logicforge/core/registry.h"

// The think/answer response protocol, the binary reward and the evaluation
// metrics built on it.
namespace logicforge::protocol {

struct ParsedResponse {
  bool format_ok = false;
  // Trimmed content of the last <answer>...</answer> pair; only set when
  // format_ok.
  std::optional<std::string> answer_text;
};

// format_ok when the text holds at least one <think>...</think> pair and at
// least one <answer>...</answer> pair. A pair is an opening tag followed by
// its closing tag with no second opening tag of the same name in between.
// Tags are case-sensitive. Never throws.
ParsedResponse check_format(std::string_view response);

// Trimmed content of the last answer pair regardless of the think tag.
std::optional<std::string> last_answer(std::string_view response);

struct Verdict {
  bool format_ok = false;
  bool correct = false;
  int reward = 0;
  // Why the answer was not judged correct, when that is not simply a wrong
  // answer (no answer tag, unparseable text, malformed payload).
  std::string detail;
};

// 1 exactly when the response follows the format and the answer is correct.
int binary_reward(bool format_ok, bool correct);

// Parses the last answer with the task's grammar and verifies it against the
// payload. Correctness is judged even when the think tag is missing, so every
// (format, correct) combination is observable; the reward is still 0 then.
// Throws UnknownTaskError; every other problem yields reward 0.
Verdict compute_reward(const Registry& registry, std::string_view task, const Json& payload,
                       std::string_view response);

// Mean of 0/1 rewards. Throws std::invalid_argument on an empty set or a value
// other than 0 or 1.
Rational avg_at_k(std::span<const int> rewards);
// 1 when any attempt succeeded. Same errors as avg_at_k.
int pass_at_k(std::span<const int> rewards);

// The phrases counted as reflection, matched as lowercase substrings.
std::span<const std::string_view> reflection_phrases();
bool has_reflection(std::string_view response);
// Fraction of responses containing a reflection phrase. Throws
// std::invalid_argument on an empty list.
Rational reflection_ratio(std::span<const std::string> responses);

struct PromptOptions {
  // Repeat the instruction paragraph twice, as the original template figure
  // shows it.
  bool duplicate_instruction = false;
};

// The instruction paragraph of the training template.
std::string_view training_instruction();

// Instruction, a blank line, then the problem text verbatim.
std::string render_training_prompt(std::string_view problem_text, const PromptOptions& options = {});

}  // namespace logicforge::protocol
