#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicforge/core/json.h"
#include "logicforge/core/rng.h"
#include "logicforge/core/task.h"

// Deduction tasks: Web of Lies and Object Counting.
namespace logicforge::deduction {

// --- web of lies ---------------------------------------------------------

// Truth value of every person in the chain. Person 0 has the anchor value;
// person i (i >= 1) claims that person i-1 tells the truth when
// claims_truthful[i-1] is set, and that person i-1 lies otherwise.
std::vector<bool> liar_propagate(bool anchor, const std::vector<bool>& claims_truthful);

Generated weboflies_generate(int num_people, Rng& rng);

// --- object counting -----------------------------------------------------

struct CategoryItem {
  std::string singular;
  std::string plural;
};

struct Category {
  std::string name;
  std::string plural;
  std::vector<CategoryItem> items;
};

// Parsed from data/categories.txt.
const std::vector<Category>& categories();

struct SceneItem {
  std::string name;  // singular form
  std::string category;
  int quantity = 1;
};

// "I have a violin, three apples, and two carrots."
std::string render_scene(const std::vector<SceneItem>& items);
// Inverse of render_scene: (singular name, quantity) in order. nullopt when the
// text is not in rendered form or names an unknown item.
std::optional<std::vector<std::pair<std::string, int>>> parse_scene(std::string_view text);

// "zero" .. "twenty"; empty beyond.
std::string_view number_word(int n);
// Digits, or a number word from zero to twenty (case-insensitive).
std::optional<std::int64_t> parse_count(std::string_view text);

Generated object_counting_generate(int num_items, int num_categories, int max_qty, Rng& rng);

// --- task plugins --------------------------------------------------------

std::shared_ptr<const Task> make_web_of_lies_task();
std::shared_ptr<const Task> make_object_counting_task();

}  // namespace logicforge::deduction
