#include <algorithm>
#include <cmath>
#include <numeric>

#include "internal.h"
#include "latin_solver.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {
namespace {

using detail::LatinSolver;
using detail::SearchBudget;

constexpr std::uint64_t kDigBudget = 1'000'000;

struct SudokuSpec {
  int n;
  int box_rows;
  int box_cols;
  Grid givens;
};

SudokuSpec read_spec(const Json& payload) {
  int n = static_cast<int>(payload::require_int(payload, "n", 2, 9));
  int br = static_cast<int>(payload::require_int(payload, "box_rows", 0, n));
  int bc = static_cast<int>(payload::require_int(payload, "box_cols", 0, n));
  return SudokuSpec{n, br, bc, grid_from_json(payload::require_field(payload, "givens"), n, n, 0, n)};
}

Json make_payload(int n, int br, int bc, const Grid& givens) {
  Json p = payload::new_payload();
  p["n"] = n;
  p["box_rows"] = br;
  p["box_cols"] = bc;
  p["latin"] = br == 0;
  p["givens"] = grid_to_json(givens);
  return p;
}

bool all_different(const std::vector<int>& values) {
  std::vector<int> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

class SudokuTask : public detail::GridAnswerTask {
 public:
  SudokuTask()
      : GridAnswerTask("sudoku",
                       {tasks::int_param("n", 2, 9, 6, 9,
                                         "side length; prime sizes drop the box rule"),
                        tasks::int_param("empties", 0, 72, 18, 50, "number of blank cells")}) {}

  void check_params(const DifficultyParams& params) const override {
    int n = params.get_small("n");
    int empties = params.get_small("empties");
    if (empties > n * n - n) {
      throw ParamError("sudoku: empties must be at most n*n - n = " + std::to_string(n * n - n));
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    int n = params.get_small("n");
    auto [br, bc] = sudoku_box_shape(n);
    return sudoku_generate(n, br, bc, params.get_small("empties"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    auto spec = read_spec(payload);
    bool latin = payload::require_bool(payload, "latin");
    if (latin != (spec.box_rows == 0) || (spec.box_rows == 0) != (spec.box_cols == 0) ||
        (spec.box_rows > 0 && spec.box_rows * spec.box_cols != spec.n)) {
      throw StructuralError("sudoku: inconsistent box shape");
    }
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload);
    int n = spec.n;
    Grid g = detail::answer_grid(answer, n, n);
    for (int i = 0; i < n * n; ++i) {
      int v = g.cells[static_cast<std::size_t>(i)];
      if (v < 1 || v > n) return false;
      int given = spec.givens.cells[static_cast<std::size_t>(i)];
      if (given != 0 && given != v) return false;
    }
    for (int i = 0; i < n; ++i) {
      std::vector<int> row, col;
      for (int j = 0; j < n; ++j) {
        row.push_back(g.at(i, j));
        col.push_back(g.at(j, i));
      }
      if (!all_different(row) || !all_different(col)) return false;
    }
    if (spec.box_rows > 0) {
      for (int top = 0; top < n; top += spec.box_rows) {
        for (int left = 0; left < n; left += spec.box_cols) {
          std::vector<int> box;
          for (int r = top; r < top + spec.box_rows; ++r) {
            for (int c = left; c < left + spec.box_cols; ++c) box.push_back(g.at(r, c));
          }
          if (!all_different(box)) return false;
        }
      }
    }
    return true;
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    std::string n = std::to_string(spec.n);
    std::string out = "Solve the following " + detail::dims(spec.n, spec.n) +
                      " Sudoku puzzle. Fill every empty cell (shown as 0) with a number from 1 to " +
                      n + " so that ";
    if (spec.box_rows > 0) {
      out += "every row, every column and every " + detail::dims(spec.box_rows, spec.box_cols) +
             " box (" + std::to_string(spec.box_rows) + " rows by " +
             std::to_string(spec.box_cols) + " columns) contains each number exactly once.";
    } else {
      out += "every row and every column contains each number exactly once. There is no box rule.";
    }
    out += "\n\nPuzzle:\n" + format_grid(spec.givens);
    out += "\n\nGive the completed grid as " + n + " lines of " + n +
           " numbers separated by spaces.";
    return out;
  }

 protected:
  std::pair<int, int> answer_shape(const Json& payload) const override {
    int n = static_cast<int>(payload::require_int(payload, "n", 2, 9));
    return {n, n};
  }
};

}  // namespace

std::pair<int, int> sudoku_box_shape(int n) {
  for (int r = static_cast<int>(std::sqrt(static_cast<double>(n))); r >= 2; --r) {
    if (n % r == 0) return {r, n / r};
  }
  return {0, 0};
}

Generated sudoku_generate(int n, int box_rows, int box_cols, int empties, Rng& rng) {
  if (n < 2 || n > 9) throw ParamError("sudoku: n must be in [2, 9]");
  if ((box_rows == 0) != (box_cols == 0) || (box_rows > 0 && box_rows * box_cols != n)) {
    throw ParamError("sudoku: box_rows * box_cols must equal n");
  }
  if (empties < 0 || empties > n * n - n) throw ParamError("sudoku: empties out of range");

  std::vector<int> order(static_cast<std::size_t>(n * n));
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Grid solution = detail::random_latin(n, box_rows, box_cols, rng);
    Grid puzzle = solution;
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    LatinSolver solver(n, box_rows, box_cols);
    int removed = 0;
    for (int idx : order) {
      if (removed == empties) break;
      int keep = puzzle.cells[static_cast<std::size_t>(idx)];
      puzzle.cells[static_cast<std::size_t>(idx)] = 0;
      solver.load(puzzle);
      bool unique = detail::provably_unique([&] {
        SearchBudget budget(kDigBudget);
        return solver.count(2, budget, nullptr);
      });
      if (unique) {
        ++removed;
      } else {
        puzzle.cells[static_cast<std::size_t>(idx)] = keep;
      }
    }
    if (removed == empties) {
      return Generated{make_payload(n, box_rows, box_cols, puzzle), grid_to_json(solution)};
    }
  }
  throw GenerationExhausted("sudoku: no unique puzzle with " + std::to_string(empties) + " empties",
                            kMaxGenerationAttempts);
}

namespace detail {

std::uint64_t count_sudoku(const Json& payload, CountOptions options, std::vector<Json>* solutions) {
  auto spec = read_spec(payload);
  LatinSolver solver(spec.n, spec.box_rows, spec.box_cols);
  if (!solver.load(spec.givens)) return 0;
  SearchBudget budget(options.node_budget);
  std::vector<Grid> found;
  auto count = solver.count(options.limit, budget, solutions ? &found : nullptr);
  if (solutions) {
    for (const auto& g : found) solutions->push_back(grid_to_json(g));
  }
  return count;
}

}  // namespace detail

std::shared_ptr<const Task> make_sudoku_task() { return std::make_shared<SudokuTask>(); }

}  // namespace logicforge::grid
