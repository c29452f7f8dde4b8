#include <algorithm>
#include <numeric>

#include "internal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {
namespace {

using detail::kDirs4;
using detail::SearchBudget;

constexpr std::uint64_t kDigBudget = 500'000;

struct NumbrixSpec {
  int rows;
  int cols;
  Grid givens;
};

NumbrixSpec read_spec(const Json& payload) {
  int rows = static_cast<int>(payload::require_int(payload, "rows", 1, 12));
  int cols = static_cast<int>(payload::require_int(payload, "cols", 1, 12));
  return NumbrixSpec{rows, cols,
                     grid_from_json(payload::require_field(payload, "givens"), rows, cols, 0,
                                    rows * cols)};
}

// Extends a path of consecutive numbers outward from the smallest given,
// first upward to rows*cols and then downward to 1. Pruning: the next given
// must be reachable in the remaining steps (Manhattan distance and parity),
// and the unnumbered cells must split into at most two connected pieces, each
// touching one of the two growing ends.
class NumbrixSolver {
 public:
  explicit NumbrixSolver(const NumbrixSpec& spec)
      : rows_(spec.rows), cols_(spec.cols), total_(spec.rows * spec.cols) {
    pos_.assign(static_cast<std::size_t>(total_ + 1), -1);
    value_.assign(static_cast<std::size_t>(total_), 0);
    for (int idx = 0; idx < total_; ++idx) {
      int v = spec.givens.cells[static_cast<std::size_t>(idx)];
      if (v == 0) continue;
      if (pos_[static_cast<std::size_t>(v)] >= 0) duplicate_ = true;
      pos_[static_cast<std::size_t>(v)] = idx;
      value_[static_cast<std::size_t>(idx)] = v;
    }
    next_given_.assign(static_cast<std::size_t>(total_ + 2), 0);
    int next = 0;
    for (int v = total_; v >= 1; --v) {
      next_given_[static_cast<std::size_t>(v)] = next;
      if (pos_[static_cast<std::size_t>(v)] >= 0) next = v;
    }
    given_ = value_;
  }

  std::uint64_t count(std::uint64_t limit, SearchBudget& budget, std::vector<Grid>* solutions) {
    found_ = 0;
    limit_ = limit;
    if (limit == 0 || duplicate_) return 0;
    int anchor_value = 0;
    for (int v = 1; v <= total_; ++v) {
      if (pos_[static_cast<std::size_t>(v)] >= 0) {
        anchor_value = v;
        break;
      }
    }
    if (anchor_value == 0) {
      // No givens: 1 may start anywhere.
      for (int idx = 0; idx < total_ && found_ < limit_; ++idx) {
        value_[static_cast<std::size_t>(idx)] = 1;
        anchor_ = idx;
        low_ = 1;
        up(idx, 1, budget, solutions);
        value_[static_cast<std::size_t>(idx)] = 0;
      }
      return found_;
    }
    anchor_ = pos_[static_cast<std::size_t>(anchor_value)];
    low_ = anchor_value;
    up(anchor_, anchor_value, budget, solutions);
    return found_;
  }

 private:
  int dist(int a, int b) const {
    return std::abs(a / cols_ - b / cols_) + std::abs(a % cols_ - b % cols_);
  }

  template <typename Fn>
  void for_neighbors(int idx, Fn&& fn) const {
    int r = idx / cols_, c = idx % cols_;
    for (const auto& d : kDirs4) {
      int rr = r + d[0], cc = c + d[1];
      if (rr >= 0 && rr < rows_ && cc >= 0 && cc < cols_) fn(rr * cols_ + cc);
    }
  }

  // Cells not yet on the path: empty cells plus givens beyond `head_value`.
  bool open(int idx, int head_value) const {
    int v = value_[static_cast<std::size_t>(idx)];
    return v == 0 || (given_[static_cast<std::size_t>(idx)] && v > head_value);
  }

  bool pieces_ok(int head, int head_value, bool lower_pending) const {
    std::vector<char> seen(static_cast<std::size_t>(total_), 0);
    int pieces = 0;
    for (int start = 0; start < total_; ++start) {
      if (seen[static_cast<std::size_t>(start)] || !open(start, head_value)) continue;
      if (++pieces > 2) return false;
      bool touches = false;
      std::vector<int> stack{start};
      seen[static_cast<std::size_t>(start)] = 1;
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for_neighbors(cur, [&](int nb) {
          if (nb == head || (lower_pending && nb == low_cell())) touches = true;
          if (!seen[static_cast<std::size_t>(nb)] && open(nb, head_value)) {
            seen[static_cast<std::size_t>(nb)] = 1;
            stack.push_back(nb);
          }
        });
      }
      if (!touches) return false;
    }
    return true;
  }

  int low_cell() const { return low_cell_; }

  void record(std::vector<Grid>* solutions) {
    ++found_;
    if (solutions) {
      Grid g(rows_, cols_);
      g.cells = value_;
      solutions->push_back(std::move(g));
    }
  }

  // Places head_value+1 next to `head`.
  void up(int head, int head_value, SearchBudget& budget, std::vector<Grid>* solutions) {
    budget.tick();
    if (head_value == total_) {
      low_cell_ = anchor_;
      down(anchor_, low_, budget, solutions);
      return;
    }
    int want = head_value + 1;
    low_cell_ = anchor_;
    int fixed = pos_[static_cast<std::size_t>(want)];
    int target = next_given_[static_cast<std::size_t>(head_value)];
    for_neighbors(head, [&](int nb) {
      if (found_ >= limit_) return;
      if (fixed >= 0) {
        if (nb != fixed) return;
      } else if (value_[static_cast<std::size_t>(nb)] != 0) {
        return;
      }
      if (target > want) {
        int d = dist(nb, pos_[static_cast<std::size_t>(target)]);
        if (d > target - want || (target - want - d) % 2 != 0) return;
      }
      if (fixed < 0) value_[static_cast<std::size_t>(nb)] = want;
      low_cell_ = anchor_;
      if (pieces_ok(nb, want, low_ > 1)) up(nb, want, budget, solutions);
      if (fixed < 0) value_[static_cast<std::size_t>(nb)] = 0;
    });
  }

  // Places low_value-1 next to `low`.
  void down(int low, int low_value, SearchBudget& budget, std::vector<Grid>* solutions) {
    budget.tick();
    if (low_value == 1) {
      record(solutions);
      return;
    }
    int want = low_value - 1;
    for_neighbors(low, [&](int nb) {
      if (found_ >= limit_ || value_[static_cast<std::size_t>(nb)] != 0) return;
      value_[static_cast<std::size_t>(nb)] = want;
      low_cell_ = nb;
      if (pieces_ok(nb, total_, false)) down(nb, want, budget, solutions);
      value_[static_cast<std::size_t>(nb)] = 0;
    });
  }

  int rows_;
  int cols_;
  int total_;
  std::vector<int> pos_;         // value -> given cell or -1
  std::vector<int> value_;       // current numbering
  std::vector<int> given_;       // given values, 0 elsewhere
  std::vector<int> next_given_;  // smallest given value above v, 0 if none
  bool duplicate_ = false;
  int anchor_ = 0;
  int low_ = 1;
  int low_cell_ = 0;
  std::uint64_t found_ = 0;
  std::uint64_t limit_ = 0;
};

bool unique_under(const NumbrixSpec& spec) {
  return detail::provably_unique([&] {
    NumbrixSolver solver(spec);
    SearchBudget budget(kDigBudget);
    return solver.count(2, budget, nullptr);
  });
}

// Random Hamiltonian path: start from a serpentine and apply backbite moves.
std::vector<int> random_path(int rows, int cols, Rng& rng) {
  std::vector<int> path;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) path.push_back(r * cols + (r % 2 == 0 ? c : cols - 1 - c));
  }
  int total = rows * cols;
  if (total < 3) return path;
  std::vector<int> where(static_cast<std::size_t>(total));
  int moves = 50 * total;
  for (int step = 0; step < moves; ++step) {
    if (rng.chance(1, 2)) std::reverse(path.begin(), path.end());
    for (int i = 0; i < total; ++i) where[static_cast<std::size_t>(path[static_cast<std::size_t>(i)])] = i;
    int head = path[0];
    std::vector<int> options;
    int r = head / cols, c = head % cols;
    for (const auto& d : kDirs4) {
      int rr = r + d[0], cc = c + d[1];
      if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
      int j = where[static_cast<std::size_t>(rr * cols + cc)];
      if (j > 1) options.push_back(j);
    }
    if (options.empty()) continue;
    int j = rng.pick(options);
    std::reverse(path.begin(), path.begin() + j);
  }
  return path;
}

class NumbrixTask : public detail::GridAnswerTask {
 public:
  NumbrixTask()
      : GridAnswerTask("numbrix",
                       {tasks::int_param("rows", 2, 7, 4, 6, "grid rows"),
                        tasks::int_param("cols", 2, 7, 4, 6, "grid columns"),
                        tasks::int_param("num_givens", 2, 49, 8, 12, "numbers shown", false)}) {}

  void check_params(const DifficultyParams& params) const override {
    if (params.get_small("num_givens") > params.get_small("rows") * params.get_small("cols")) {
      throw ParamError("numbrix: num_givens must be at most rows*cols");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return numbrix_generate(params.get_small("rows"), params.get_small("cols"),
                            params.get_small("num_givens"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_spec(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload);
    int total = spec.rows * spec.cols;
    Grid g = detail::answer_grid(answer, spec.rows, spec.cols);
    std::vector<Cell> where(static_cast<std::size_t>(total + 1), Cell{-1, -1});
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        int v = g.at(r, c);
        if (v < 1 || v > total) return false;
        if (where[static_cast<std::size_t>(v)].r >= 0) return false;
        where[static_cast<std::size_t>(v)] = Cell{r, c};
        int given = spec.givens.at(r, c);
        if (given != 0 && given != v) return false;
      }
    }
    for (int v = 1; v < total; ++v) {
      Cell a = where[static_cast<std::size_t>(v)];
      Cell b = where[static_cast<std::size_t>(v + 1)];
      if (std::abs(a.r - b.r) + std::abs(a.c - b.c) != 1) return false;
    }
    return true;
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    std::string total = std::to_string(spec.rows * spec.cols);
    return "Solve the following " + detail::dims(spec.rows, spec.cols) +
           " Numbrix puzzle. Fill every empty cell (shown as 0) so that the grid contains each "
           "number from 1 to " + total +
           " exactly once and every pair of consecutive numbers sits in orthogonally adjacent "
           "cells (sharing a side), forming a single path from 1 to " + total +
           ".\n\nGrid:\n" + format_grid(spec.givens) + "\n\nGive the completed grid as " +
           std::to_string(spec.rows) + " lines of " + std::to_string(spec.cols) +
           " numbers separated by spaces.";
  }

 protected:
  std::pair<int, int> answer_shape(const Json& payload) const override {
    return {static_cast<int>(payload::require_int(payload, "rows", 1, 12)),
            static_cast<int>(payload::require_int(payload, "cols", 1, 12))};
  }
};

}  // namespace

Generated numbrix_generate(int rows, int cols, int num_givens, Rng& rng) {
  if (rows < 1 || rows > 12 || cols < 1 || cols > 12) {
    throw ParamError("numbrix: grid dimensions out of range");
  }
  int total = rows * cols;
  if (num_givens < 1 || num_givens > total) throw ParamError("numbrix: num_givens out of range");
  std::vector<int> order(static_cast<std::size_t>(total));
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::vector<int> path = random_path(rows, cols, rng);
    Grid solution(rows, cols);
    for (int i = 0; i < total; ++i) solution.cells[static_cast<std::size_t>(path[static_cast<std::size_t>(i)])] = i + 1;
    NumbrixSpec spec{rows, cols, solution};
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    int shown = total;
    for (int idx : order) {
      if (shown == num_givens) break;
      int keep = spec.givens.cells[static_cast<std::size_t>(idx)];
      spec.givens.cells[static_cast<std::size_t>(idx)] = 0;
      if (unique_under(spec)) {
        --shown;
      } else {
        spec.givens.cells[static_cast<std::size_t>(idx)] = keep;
      }
    }
    if (shown != num_givens) continue;
    Json p = payload::new_payload();
    p["rows"] = rows;
    p["cols"] = cols;
    p["givens"] = grid_to_json(spec.givens);
    return Generated{std::move(p), grid_to_json(solution)};
  }
  throw GenerationExhausted("numbrix: no unique puzzle with " + std::to_string(num_givens) +
                                " givens",
                            kMaxGenerationAttempts);
}

namespace detail {

std::uint64_t count_numbrix(const Json& payload, CountOptions options, std::vector<Json>* solutions) {
  auto spec = read_spec(payload);
  NumbrixSolver solver(spec);
  SearchBudget budget(options.node_budget);
  std::vector<Grid> found;
  auto count = solver.count(options.limit, budget, solutions ? &found : nullptr);
  if (solutions) {
    for (const auto& g : found) solutions->push_back(grid_to_json(g));
  }
  return count;
}

}  // namespace detail

std::shared_ptr<const Task> make_numbrix_task() { return std::make_shared<NumbrixTask>(); }

}  // namespace logicforge::grid
