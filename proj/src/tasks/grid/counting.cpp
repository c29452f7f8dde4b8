#include <array>

#include "internal.h"

namespace logicforge::grid {
namespace {

using CountFn = std::uint64_t (*)(const Json&, CountOptions, std::vector<Json>*);

struct Counter {
  std::shared_ptr<const Task> task;
  CountFn count;
};

const Counter& counter_for(std::string_view name) {
  static const std::array<Counter, 7> counters = {
      Counter{make_sudoku_task(), detail::count_sudoku},
      Counter{make_futoshiki_task(), detail::count_futoshiki},
      Counter{make_skyscraper_task(), detail::count_skyscraper},
      Counter{make_campsite_task(), detail::count_campsite},
      Counter{make_star_placement_task(), detail::count_star_placement},
      Counter{make_numbrix_task(), detail::count_numbrix},
      Counter{make_minesweeper_task(), detail::count_minesweeper},
  };
  for (const auto& c : counters) {
    if (c.task->name() == name) return c;
  }
  throw UnknownTaskError(std::string(name));
}

}  // namespace

std::uint64_t count_solutions(std::string_view task, const Json& payload, CountOptions options) {
  const Counter& counter = counter_for(task);
  counter.task->check_payload(payload);
  return counter.count(payload, options, nullptr);
}

std::vector<Json> enumerate_solutions(std::string_view task, const Json& payload,
                                      CountOptions options) {
  const Counter& counter = counter_for(task);
  counter.task->check_payload(payload);
  std::vector<Json> out;
  counter.count(payload, options, &out);
  return out;
}

}  // namespace logicforge::grid
