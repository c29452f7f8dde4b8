#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicforge/core/errors.h"
#include "logicforge/core/json.h"
#include "logicforge/tasks/grid.h"
#include "../task_base.h"

namespace logicforge::grid::detail {

class SearchBudget {
 public:
  explicit SearchBudget(std::uint64_t budget) : budget_(budget) {}
  void tick() {
    if (++nodes_ > budget_) throw BudgetExceeded(nodes_);
  }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
};

// Each counts solutions of an already-validated payload (check_payload is run
// by the dispatcher), appending canonical answers to `solutions` when non-null.
std::uint64_t count_sudoku(const Json& payload, CountOptions options, std::vector<Json>* solutions);
std::uint64_t count_futoshiki(const Json& payload, CountOptions options,
                              std::vector<Json>* solutions);
std::uint64_t count_skyscraper(const Json& payload, CountOptions options,
                               std::vector<Json>* solutions);
std::uint64_t count_campsite(const Json& payload, CountOptions options,
                             std::vector<Json>* solutions);
std::uint64_t count_star_placement(const Json& payload, CountOptions options,
                                   std::vector<Json>* solutions);
std::uint64_t count_numbrix(const Json& payload, CountOptions options, std::vector<Json>* solutions);
std::uint64_t count_minesweeper(const Json& payload, CountOptions options,
                                std::vector<Json>* solutions);

// Number of solutions, treating an exhausted budget as "not provably unique".
template <typename CountFn>
bool provably_unique(CountFn&& count) {
  try {
    return count() == 1;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

// Answer grid of the payload's shape, values unchecked beyond a sanity range
// so that out-of-domain entries verify false instead of throwing.
Grid answer_grid(const Json& answer, int rows, int cols);

// Tasks whose canonical answer is a full grid of integers.
class GridAnswerTask : public tasks::TaskBase {
 public:
  using TaskBase::TaskBase;
  std::optional<Json> parse_answer(const Json& payload, std::string_view text) const override;
  std::string format_answer(const Json& answer) const override;

 protected:
  virtual std::pair<int, int> answer_shape(const Json& payload) const = 0;
};

// Tasks whose canonical answer is a set of cells.
class CellSetAnswerTask : public tasks::TaskBase {
 public:
  using TaskBase::TaskBase;
  std::optional<Json> parse_answer(const Json& payload, std::string_view text) const override;
  std::string format_answer(const Json& answer) const override;

 protected:
  virtual std::pair<int, int> board_shape(const Json& payload) const = 0;
};

// "RxC" for prompts.
std::string dims(int rows, int cols);

inline constexpr int kDirs4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
inline constexpr int kDirs8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                     {0, 1},   {1, -1}, {1, 0},  {1, 1}};

}  // namespace logicforge::grid::detail
