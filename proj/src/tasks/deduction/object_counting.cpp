#include <algorithm>
#include <map>

#include "../task_base.h"
#include "logicforge/tasks/deduction.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::data {
std::string_view categories_txt();
}

namespace logicforge::deduction {
namespace {

constexpr std::string_view kNumberWords[] = {
    "zero",    "one",     "two",       "three",    "four",     "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty"};
constexpr int kMaxItems = 20;
constexpr int kMaxQuantity = 10;

std::string strip(std::string_view s) { return std::string(payload::trim(s)); }

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + sep.size());
  }
  return out;
}

// Format per line: "category|plural: singular/plural, singular/plural, ...".
std::vector<Category> load_categories() {
  std::vector<Category> out;
  for (auto line : split(data::categories_txt(), "\n")) {
    line = payload::trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto colon = line.find(':');
    auto bar = line.find('|');
    if (colon == std::string_view::npos || bar == std::string_view::npos || bar > colon) {
      throw std::logic_error("categories.txt: malformed line");
    }
    Category c{strip(line.substr(0, bar)), strip(line.substr(bar + 1, colon - bar - 1)), {}};
    for (auto entry : split(line.substr(colon + 1), ",")) {
      auto slash = entry.find('/');
      if (slash == std::string_view::npos) throw std::logic_error("categories.txt: missing plural");
      c.items.push_back(CategoryItem{strip(entry.substr(0, slash)), strip(entry.substr(slash + 1))});
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Noun form (singular or plural) to (singular, category).
const std::map<std::string, std::pair<std::string, std::string>, std::less<>>& noun_index() {
  static const auto index = [] {
    std::map<std::string, std::pair<std::string, std::string>, std::less<>> m;
    for (const auto& c : categories()) {
      for (const auto& item : c.items) {
        m[item.singular] = {item.singular, c.name};
        m[item.plural] = {item.singular, c.name};
      }
    }
    return m;
  }();
  return index;
}

const Category* find_category(std::string_view name) {
  for (const auto& c : categories()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const CategoryItem* find_item(std::string_view singular) {
  for (const auto& c : categories()) {
    for (const auto& item : c.items) {
      if (item.singular == singular) return &item;
    }
  }
  return nullptr;
}

std::string article(std::string_view noun) {
  return std::string_view("aeiou").find(noun.front()) != std::string_view::npos ? "an" : "a";
}

std::string describe(const SceneItem& item) {
  const CategoryItem* known = find_item(item.name);
  if (item.quantity == 1) return article(item.name) + " " + item.name;
  std::string noun = known ? known->plural : item.name;
  auto word = number_word(item.quantity);
  return (word.empty() ? std::to_string(item.quantity) : std::string(word)) + " " + noun;
}

struct Scene {
  std::vector<SceneItem> items;
  std::string query;
};

Scene read_scene(const Json& payload) {
  Scene s;
  for (const auto& v : payload::require_array(payload, "items", 1, static_cast<std::size_t>(kMaxItems))) {
    payload::require_object(v, "item");
    SceneItem item{payload::require_string(v, "name"), payload::require_string(v, "category"),
                   static_cast<int>(payload::require_int(v, "quantity", 1, kMaxQuantity))};
    auto it = noun_index().find(item.name);
    if (it == noun_index().end() || it->second.first != item.name || it->second.second != item.category) {
      throw StructuralError("object_counting: unknown item '" + item.name + "'");
    }
    s.items.push_back(std::move(item));
  }
  s.query = payload::require_string(payload, "query");
  if (!find_category(s.query)) throw StructuralError("object_counting: unknown category " + s.query);
  return s;
}

std::int64_t count_in(const Scene& s) {
  std::int64_t total = 0;
  for (const auto& item : s.items) {
    if (item.category == s.query) total += item.quantity;
  }
  return total;
}

class ObjectCountingTask : public tasks::TaskBase {
 public:
  ObjectCountingTask()
      : TaskBase("object_counting",
                 {tasks::int_param("num_items", 1, kMaxItems, 5, 10, "distinct items in the scene"),
                  tasks::int_param("num_categories", 2, 8, 2, 4, "categories the items come from"),
                  tasks::int_param("max_qty", 1, kMaxQuantity, 3, 5, "largest quantity per item")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return object_counting_generate(params.get_small("num_items"), params.get_small("num_categories"),
                                    params.get_small("max_qty"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_scene(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto scene = read_scene(payload);
    if (!answer.is_number_integer()) throw StructuralError("object_counting: answer must be an integer");
    return answer.get<std::int64_t>() == count_in(scene);
  }

  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    auto v = parse_count(text);
    if (!v) return std::nullopt;
    return Json(*v);
  }

  std::string format_answer(const Json& answer) const override {
    if (!answer.is_number_integer()) throw StructuralError("object_counting: answer must be an integer");
    return std::to_string(answer.get<std::int64_t>());
  }

  std::string render(const Json& payload) const override {
    auto scene = read_scene(payload);
    return render_scene(scene.items) + " How many " + find_category(scene.query)->plural +
           " do I have?\n\nAnswer with a single number.";
  }
};

}  // namespace

const std::vector<Category>& categories() {
  static const std::vector<Category> list = load_categories();
  return list;
}

std::string_view number_word(int n) {
  if (n < 0 || n > 20) return {};
  return kNumberWords[n];
}

std::optional<std::int64_t> parse_count(std::string_view text) {
  text = payload::trim(text);
  if (!text.empty() && text.back() == '.') text.remove_suffix(1);
  if (auto v = payload::parse_integer(text)) return v;
  auto word = payload::to_lower(text);
  for (int i = 0; i <= 20; ++i) {
    if (kNumberWords[i] == word) return i;
  }
  return std::nullopt;
}

std::string render_scene(const std::vector<SceneItem>& items) {
  std::string out = "I have ";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += items.size() == 2 ? " and " : (i + 1 == items.size() ? ", and " : ", ");
    out += describe(items[i]);
  }
  return out + ".";
}

std::optional<std::vector<std::pair<std::string, int>>> parse_scene(std::string_view text) {
  text = payload::trim(text);
  auto period = text.find('.');
  if (!text.starts_with("I have ") || period == std::string_view::npos) return std::nullopt;
  text = text.substr(7, period - 7);
  auto pieces = split(text, ", ");
  if (pieces.size() == 1) pieces = split(text, " and ");
  std::vector<std::pair<std::string, int>> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    auto piece = pieces[i];
    if (pieces.size() > 2 && i + 1 == pieces.size()) {
      if (!piece.starts_with("and ")) return std::nullopt;
      piece.remove_prefix(4);
    }
    auto space = piece.find(' ');
    if (space == std::string_view::npos) return std::nullopt;
    auto head = piece.substr(0, space);
    auto noun = piece.substr(space + 1);
    std::optional<std::int64_t> qty;
    if (head == "a" || head == "an") {
      qty = 1;
    } else {
      qty = parse_count(head);
    }
    auto it = noun_index().find(noun);
    if (!qty || it == noun_index().end()) return std::nullopt;
    out.emplace_back(it->second.first, static_cast<int>(*qty));
  }
  return out;
}

Generated object_counting_generate(int num_items, int num_categories, int max_qty, Rng& rng) {
  const auto& all = categories();
  if (num_categories < 2 || num_categories > static_cast<int>(all.size())) {
    throw ParamError("object_counting: num_categories must be in [2, " + std::to_string(all.size()) + "]");
  }
  if (num_items < 1 || num_items > kMaxItems) throw ParamError("object_counting: num_items out of range");
  if (max_qty < 1 || max_qty > kMaxQuantity) throw ParamError("object_counting: max_qty out of range");

  std::vector<const Category*> chosen;
  for (const auto& c : all) chosen.push_back(&c);
  rng.shuffle(chosen);
  chosen.resize(static_cast<std::size_t>(num_categories));

  std::vector<std::pair<const Category*, const CategoryItem*>> pool;
  for (const auto* c : chosen) {
    for (const auto& item : c->items) pool.emplace_back(c, &item);
  }
  if (static_cast<std::size_t>(num_items) > pool.size()) {
    throw ParamError("object_counting: not enough distinct items for num_items");
  }
  rng.shuffle(pool);
  std::vector<SceneItem> items;
  for (int i = 0; i < num_items; ++i) {
    const auto& [c, item] = pool[static_cast<std::size_t>(i)];
    items.push_back(SceneItem{item->singular, c->name, rng.uniform_int(1, max_qty)});
  }
  std::string query = rng.pick(items).category;

  Json p = payload::new_payload();
  Json list = Json::array();
  for (const auto& item : items) {
    list.push_back(Json{{"name", item.name}, {"category", item.category}, {"quantity", item.quantity}});
  }
  p["items"] = std::move(list);
  p["query"] = query;
  std::int64_t total = 0;
  for (const auto& item : items) {
    if (item.category == query) total += item.quantity;
  }
  return Generated{std::move(p), Json(total)};
}

std::shared_ptr<const Task> make_object_counting_task() {
  return std::make_shared<ObjectCountingTask>();
}

}  // namespace logicforge::deduction
